2: 1
