from collections import Counter

# count words in a fixed sentence
TEXT = "the quick brown fox jumps over the lazy dog the end"
for word, n in sorted(Counter(TEXT.split()).items()):
    print(word, n)
