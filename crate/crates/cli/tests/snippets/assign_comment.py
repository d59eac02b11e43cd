x = 1  # init
