2: 1 1
7: 1 -1 2 -2
