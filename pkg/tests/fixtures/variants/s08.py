values = [1, 2, 3,
total = sum(v for v in values
            if v % 2 == 0)
mapping = {
    "a": 1,
    "b": 2,
}
# end
