# compute factorials iteratively
def factorial(n):
    result = 1
    for i in range(2, n + 1):
        result *= i
    return result

for k in range(6):
    print(k, factorial(k))
