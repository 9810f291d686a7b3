matrix = [[1, 2, 3], [4, 5, 6]]
result = []
for i in range(len(matrix[0])):
    row = []
    for j in range(len(matrix)):
        row.append(matrix[i][j])
    result.append(row)
print(result)
