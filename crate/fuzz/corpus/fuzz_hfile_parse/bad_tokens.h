4: 1 2
