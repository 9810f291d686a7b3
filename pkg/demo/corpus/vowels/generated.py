def count_vowels(s):
    """Count vowels in s."""
    return sum(1 for ch in s.lower() if ch in "aeiou")

for w in ["banana", "sky", "Education"]:
    print(w, count_vowels(w))
