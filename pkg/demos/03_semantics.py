"""From a derivation to a logical formula, step by step."""

from catgram.lambda_core import format_term
from catgram.montague import analyze, composition_stages, format_formula, parse, read_lexicon

lex = read_lexicon("sosta")
print("== Lexicon ==")
for entry in lex:
    print(f"  {entry.word:12} {str(entry.category):28} {format_term(entry.semantics)}")

sentence = "some statements speak_about themselves"
(p,) = parse(sentence, lex)
terms = [e.semantics for e in p.entries]
print(f"\n== {sentence} ==")
print(f"derivation shape: {p.derivation.rule_shape()}")
for k, stage in enumerate(composition_stages(p.derivation, terms)):
    print(f"stage {k}: {format_term(stage, unicode=True)}")

(reading,) = analyze(sentence, lex)
print(f"\nformula: {format_formula(reading.formula)}")

print("\n== Quantified and plain noun phrases ==")
aime = read_lexicon("aime")
for s in ["Pierre aime Garance", "Garance aime Pierre"]:
    readings = analyze(s, aime)
    print(f"{s}: {[format_formula(r.formula) for r in readings]}")
