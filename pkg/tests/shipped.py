"""Every coset enumeration the package ships a claim about, as (label, table) pairs."""

from ballquot import data, dm, hirzebruch
from ballquot.cosets import FELSCH, HLT, coset_enumerate


def shipped_enumerations():
    out = []
    for name in ("3-3-3.pres", "3-4-6.pres"):
        p = data.load_presentation(name)
        for s in (HLT, FELSCH):
            out.append((f"{name}/{s}", coset_enumerate(p, strategy=s)))
    for s in (HLT, FELSCH):
        out.append((f"dm.H/{s}", dm.enumerate_H(s).table))
    gw = hirzebruch.gw_words()
    lam = hirzebruch.lambda_quotient()
    for n in (1, 3):
        sub = [gw[f"g{i}"] ** n for i in range(1, 5)] + [gw["w1"] ** n]
        for s in (HLT, FELSCH):
            out.append((f"lambda.n{n}/{s}", coset_enumerate(lam, sub, strategy=s)))
    out.append(("gamma.n3/tc", hirzebruch.gamma_n_table_todd_coxeter(3)))
    out.append(("gamma.n3/quotient", hirzebruch.gamma_n_table(3)))
    out.append(("delta.n3/quotient", hirzebruch.delta_n_table(3)))
    return out
