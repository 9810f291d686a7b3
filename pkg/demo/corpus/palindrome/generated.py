def is_palindrome(s):
    # keep letters only
    s = [c.lower() for c in s if c.isalpha()]
    return s == s[::-1]

print(is_palindrome("A man, a plan, a canal: Panama"))
print(is_palindrome("hello")
