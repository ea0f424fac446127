"""Regenerate the bundled English mini corpus (corpus.tsv, reference.txt).

The corpus is synthetic but structurally realistic: token counts follow a
Zipf-like curve over a shuffled rank order, every word is spread over one
or more of 150 documents, a block of technical terms is concentrated in
one or two documents each (so the concentration-ratio filter has real
work to do), and a sprinkle of rows exercises every rejection path
(proper nouns, other POS tags, all-caps, digits, out-of-list lemmas,
unknown tags).

Deterministic: same wordlist in, byte-identical corpus out.
"""

import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
DATA = HERE.parent / "src" / "vocabforge" / "data" / "mini_en"
SEED = 20260815
N_DOCS = 150

# technical terms that get crammed into 1-2 documents each; everything
# else is spread widely enough to pass the jargon cut
CONCENTRATED = """
acetylene actuator adjuvant aldehyde alkali alkaloid allele alluvium
ammeter amygdala anion anode anticline antigen aorta apogee aquifer
armature arthropod axon bacillus bacterium benzene bitumen borax bromine
bryophyte calcite caldera cambium capacitor capillary carbide carburetor
cathode cation cellulose centrifuge chlorophyll chloroplast chromosome
chrysalis cochlea codon coefficient colloid compressor condenser
conduction cotyledon cytoplasm dendrite diffraction diode dioxide dynamo
electrode electrolyte epicenter epidermis epithelium equinox ester
ethanol fission flagellum fluoride follicle fulcrum fuselage ganglion
gasket genome glycerin hemoglobin hydrate hypotenuse impedance inductor
insulator ion isotope keratin kinase lactose lattice ligand lignite
lipid locus magma mandible manifold meridian metabolism methane
mitochondrion modulus mollusk monomer monoxide morpheme mucosa mutation
myelin neutrino nitrate nucleotide ohm organelle oscillator osmosis
ovule oxide parallax pathogen perihelion peroxide pharynx phenotype
pheromone phoneme phosphate phylum plankton platelet polymer polynomial
positron propane protoplasm protozoan quark quasar radian reactant
reactor receptor rectifier resistor rhizome ribosome rotor salinity
secretion sepal silica sinus solenoid solute solvent spectrometer spore
stamen stratosphere stratum substrate sulfate synapse tensor thorax
thrombosis thyroid tibia trachea transistor trapezoid urea vacuole
valence ventricle viscosity vortex xylem zygote
""".split()

PROPER_NOUNS = """
london paris berlin tokyo cairo oslo madrid dublin vienna lisbon
alice robert helen marco ivan greta hassan mei anna viktor
""".split()

OTHER_POS = [
    ("run", "VERB"), ("walk", "VERB"), ("see", "VERB"), ("take", "VERB"),
    ("make", "VERB"), ("go", "VERB"), ("say", "VERB"), ("think", "VERB"),
    ("quick", "ADJ"), ("slow", "ADJ"), ("large", "ADJ"), ("small", "ADJ"),
    ("red", "ADJ"), ("old", "ADJ"), ("very", "ADV"), ("often", "ADV"),
    ("the", "DET"), ("a", "DET"), ("of", "ADP"), ("in", "ADP"),
    ("it", "PRON"), ("they", "PRON"), ("and", "CCONJ"), ("if", "SCONJ"),
]

# nouns that fail a filter: all-caps surface, digits, punctuation,
# too short, or simply absent from the word list
JUNK_NOUNS = [
    ("NASA", "nasa"), ("DNA", "dna"), ("USSR", "ussr"),
    ("42nd", "42nd"), ("3d", "3d"), ("x", "x"),
    ("ice-cream", "ice-cream"), ("o'clock", "o'clock"),
    ("teh", "teh"), ("blorptex", "blorptex"), ("zyzzle", "zyzzle"),
    ("der", "der"), ("une", "une"), ("worde", "worde"),
]

UNKNOWN_POS = [("foo", "XPOS"), ("bar", "FOO"), ("baz", "POSX")]


def pluralize(word: str) -> str:
    if word.endswith(("s", "x", "z", "ch", "sh")):
        return word + "es"
    if word.endswith("y") and word[-2] not in "aeiou":
        return word[:-1] + "ies"
    return word + "s"


def main():
    rng = random.Random(SEED)
    words = [w.strip() for w in (DATA / "wordlist.txt").read_text().split()]
    missing = [w for w in CONCENTRATED if w not in set(words)]
    assert not missing, f"concentrated terms missing from wordlist: {missing}"

    ranked = list(words)
    rng.shuffle(ranked)

    rows_by_doc: dict[int, list[tuple[str, str, str]]] = {d: [] for d in range(N_DOCS)}
    concentrated = set(CONCENTRATED)
    reference_pool = []
    for rank, word in enumerate(ranked):
        if word in concentrated:
            count = rng.randint(30, 80)
            docs = rng.sample(range(N_DOCS), rng.randint(1, 2))
        else:
            count = max(3, int(8000 / (rank + 8)))
            spread = rng.uniform(2.0, 5.0)
            n_docs = max(1, min(N_DOCS, count, round(count / spread)))
            docs = rng.sample(range(N_DOCS), n_docs)
            if 9 <= count <= 30 and len(word) >= 4:
                reference_pool.append(word)
        base, extra = divmod(count, len(docs))
        for j, doc in enumerate(docs):
            for _ in range(base + (1 if j < extra else 0)):
                surface = word
                roll = rng.random()
                if roll < 0.12:
                    surface = pluralize(word)
                elif roll < 0.20:
                    surface = word.capitalize()
                rows_by_doc[doc].append((surface, word, "NOUN"))

    # noise rows on every rejection path
    for name in PROPER_NOUNS:
        for _ in range(rng.randint(3, 12)):
            doc = rng.randrange(N_DOCS)
            rows_by_doc[doc].append((name.capitalize(), name, "PROPN"))
    for word, pos in OTHER_POS:
        for _ in range(rng.randint(10, 40)):
            doc = rng.randrange(N_DOCS)
            rows_by_doc[doc].append((word, word, pos))
    for surface, lemma in JUNK_NOUNS:
        for _ in range(rng.randint(2, 8)):
            doc = rng.randrange(N_DOCS)
            rows_by_doc[doc].append((surface, lemma, "NOUN"))
    for word, pos in UNKNOWN_POS:
        for _ in range(rng.randint(2, 6)):
            doc = rng.randrange(N_DOCS)
            rows_by_doc[doc].append((word, word, pos))

    n_rows = 0
    with open(DATA / "corpus.tsv", "w", encoding="utf-8") as fh:
        fh.write("# synthetic annotated mini corpus; regenerate with "
                 "tools/build_mini_corpus.py\n")
        for doc in range(N_DOCS):
            rows = rows_by_doc[doc]
            rng.shuffle(rows)
            for surface, lemma, pos in rows:
                fh.write(f"d{doc:03d}\t{surface}\t{lemma}\t{pos}\n")
                n_rows += 1

    reference_pool.sort()
    reference = rng.sample(reference_pool, 40)
    (DATA / "reference.txt").write_text("\n".join(sorted(reference)) + "\n",
                                        encoding="utf-8")
    print(f"{n_rows} corpus rows, {len(reference)} reference items")


if __name__ == "__main__":
    main()
