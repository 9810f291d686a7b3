matrix = [[1, 2], [3, 4]]
for row in matrix:
    for value in row:
        if value % 2 == 0 and value > 2 or value == 1:
            print(value)
else_value = None
