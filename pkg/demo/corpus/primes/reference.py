def primes_up_to(limit):
    """All primes <= limit by trial division."""
    found = []
    for n in range(2, limit + 1):
        if all(n % p for p in found if p * p <= n):
            found.append(n)
    return found


print(primes_up_to(50))
