# inferred correction factors
2: 1 -1/2 1/2 0 0
3: 1 -1/3 1/3 1/3 -1/3
5: 1 -1/5 1/5 3/5 -3/5
