from collections import Counter


def is_anagram(first, second):
    """Anagram test ignoring case and spaces."""
    def norm(s):
        return Counter(s.replace(" ", "").lower())
    return norm(first) == norm(second)


print(is_anagram("listen", "silent"))
print(is_anagram("Dormitory", "dirty room"))
