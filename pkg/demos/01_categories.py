"""Categories, their semantic types, and the free-group test for derivability."""

from catgram.categories import format_category, group_check, group_image, parse_category
from catgram.montague import cat_to_type

print("== Categories ==")
for text in ["np", "np\\S", "(np\\S)/np", "S/(np\\S)", "((np\\S)/np)\\(np\\S)"]:
    c = parse_category(text)
    print(f"{format_category(c):24} type {str(cat_to_type(c)):22} group image {group_image(c)}")

print("\n== The free group as a quick necessary test ==")
cases = [
    (["S/inf", "inf/np", "np/n", "n"], "S"),    # derivable
    (["n"], "np"),                               # rejected by the group
    (["(S/np)\\S"], "np"),                       # passes, yet not derivable
]
for ant, goal in cases:
    verdict = group_check([parse_category(c) for c in ant], parse_category(goal))
    print(f"{', '.join(ant)} => {goal}: group check {'passes' if verdict else 'fails'}")
print("A failing check proves underivability; a passing one proves nothing.")
