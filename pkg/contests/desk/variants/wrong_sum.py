a, b = map(int, input().split())
if a > 100:
    print(a - b)
else:
    print(a + b)
