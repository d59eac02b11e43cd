if a > 0:
    pass
elif a < 0:
    pass
