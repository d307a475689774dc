"""Polymorphic conjunction for facets, and a path that climbs."""

import logging

from catgram import montague as mg
from catgram import systemf as sf

logging.basicConfig(level=logging.INFO, format="  [log] %(message)s")

print("== Polymorphic conjunction ==")
conj = sf.polymorphic_and()
print(f"{conj}\n  : {sf.f_type_of(conj)}")

print("\n== Copredication: a book that is both heavy and interesting ==")
livre = sf.read_f_lexicon("livre")
for formula in sf.copredicate("livre", "volumineux", "intéressant", livre):
    print(mg.format_formula(formula))

print("\n== Fictive motion: 'le chemin monte' ==")
lex = sf.read_f_lexicon("fictive")
tr = sf.fictive_motion_trace(lex)
for i, step in enumerate(tr.subject_steps):
    print(f"(le chemin) step {i}: {step}")
print(f"raised: {tr.raised_subject}")
print(f"{tr.coercion.name} applied: {tr.coerced_normal}")
print(f"with monte: {tr.normal}\n  : {sf.f_type_of(tr.normal)}")
print(mg.format_formula(sf.f_term_to_formula(tr.normal)))
