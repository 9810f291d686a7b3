import math

print(math.gcd(48, 18))
print(math.gcd(17, 5))
