# sum of squares
    total = 0
    for i in range(n):
        total += i * i
    return total


log(sum_squares(10))
# end
