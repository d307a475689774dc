"""Proof search in the Lambek calculus: parsing as deduction."""

from catgram.prover import SearchConfig, parse_sequent, prove, render

GOLDEN = {
    "guarda passare il treno": "S/inf, inf/np, np/n, n => S",
    "cosa guarda passare": "S/(S/np), S/inf, inf/np => S",
    "transitivity": "a/b, b/c => a/c",
}

for label, text in GOLDEN.items():
    (d,) = prove(parse_sequent(text))
    print(f"== {label}: {d.rule_shape()} ==")
    print(render(d))
    print()

print("== Hypothetical reasoning needs a non-empty context ==")
for text in [" => n/n", "np/n, (n/n)/(n/n), n => np"]:
    strict = prove(parse_sequent(text))
    loose = prove(parse_sequent(text), SearchConfig(allow_empty_antecedent=True))
    print(f"{text.strip():32} default: {len(strict)} derivation(s), "
          f"empty antecedents allowed: {len(loose)}")
(d,) = prove(parse_sequent("np/n, (n/n)/(n/n), n => np"), SearchConfig(allow_empty_antecedent=True))
print(render(d))

print("\n== Structural ambiguity ==")
for d in prove(parse_sequent("a/a, a, a\\a => a")):
    print(d.rule_shape())

print("\n== LaTeX (bussproofs-style \\infer) ==")
print(render(prove(parse_sequent("a/b, b => a"))[0], "latex"))
