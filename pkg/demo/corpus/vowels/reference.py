VOWELS = set("aeiouAEIOU")


def count_vowels(word):
    # count characters that are vowels
    return len([c for c in word if c in VOWELS])


for w in ["banana", "sky", "Education"]:
    print(w, count_vowels(w))
