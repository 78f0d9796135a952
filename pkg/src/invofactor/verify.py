"""Certificate checking, brute-force involution oracles, and group surveys.

Every check recomputes its identity directly from the supplied space, the
element, and the certificate's (beta, h1, h2); nothing is trusted from the
construction transcript.  Failures become named report entries with a
serialized witness, never exceptions, so a tampered certificate yields a
readable diagnosis.  `survey` drives factor-and-verify over a whole group
(or a seeded sample) and aborts loudly on the first failing certificate.
"""

from __future__ import annotations

import time

from .errors import InputError, VerificationError
from .forms import anti_unitary_enumerate, group_enumerate, group_sample
from .linalg import Mat

CHECK_NAMES = (
    "shapes_match_the_space",
    "g_is_similitude_of_beta",
    "h1_twist1_ratio_one",
    "h1_involution",
    "h2_twist1_ratio_beta",
    "h2_square_is_beta",
    "h1_h2_product_is_g",
    "h1_det_sign",
)


def _checks(form, g, beta, h1, h2, det_refined=False):
    """[(name, passed, witness-or-None)] for the defining identities."""
    F = form.tower
    n = form.n
    shaped = (
        g.tower is F
        and h1.tower is F
        and h2.tower is F
        and beta.tower is F
        and g.shape == (n, n)
        and h1.shape == (n, n)
        and h2.shape == (n, n)
    )
    if not shaped:
        wit = {
            "space": f"dimension {n} over {F!r}",
            "g": f"{g.nrows}x{g.ncols} over {g.tower!r}",
            "h1": f"{h1.nrows}x{h1.ncols} over {h1.tower!r}",
            "h2": f"{h2.nrows}x{h2.ncols} over {h2.tower!r}",
        }
        return [("shapes_match_the_space", False, wit)]
    out = [("shapes_match_the_space", True, None)]

    def add(name, ok, witness):
        out.append((name, bool(ok), None if ok else witness))

    eye = Mat.identity(F, n)
    try:
        sim_ok = form.is_similitude(g, beta)
    except InputError:
        sim_ok = False
    add(
        "g_is_similitude_of_beta",
        sim_ok,
        {"g": g.serialize(), "beta": beta.serialize()},
    )
    add("h1_twist1_ratio_one", form.anti_ratio(h1) == F.one, {"h1": h1.serialize()})
    sq1 = h1 @ h1.conj()
    add("h1_involution", sq1 == eye, {"h1_times_conj_h1": sq1.serialize()})
    add(
        "h2_twist1_ratio_beta",
        form.anti_ratio(h2) == beta,
        {"h2": h2.serialize(), "beta": beta.serialize()},
    )
    sq2 = h2 @ h2.conj()
    add(
        "h2_square_is_beta",
        sq2 == eye * beta,
        {"h2_times_conj_h2": sq2.serialize(), "beta": beta.serialize()},
    )
    prod = h1 @ h2.conj()
    add(
        "h1_h2_product_is_g",
        prod == g,
        {"h1_times_conj_h2": prod.serialize(), "g": g.serialize()},
    )
    if det_refined:
        target = F.one if (n // 2) % 2 == 0 else -F.one
        d = h1.det()
        add(
            "h1_det_sign",
            d == target,
            {"det_h1": d.serialize(), "target": target.serialize()},
        )
    return out


def core_checks(form, g, beta, h1, h2, det_refined=False):
    """[(check name, bool)] for the defining identities of g = h1 * h2."""
    return [(name, ok) for name, ok, _ in _checks(form, g, beta, h1, h2, det_refined)]


class VerifyReport:
    """Outcome of re-checking one certificate.

    `checks` is a list of (name, passed, witness) with witness None on
    success; `passed` is the conjunction.  `seconds` records the wall clock
    spent but is deliberately left out of serialize() so identical runs
    produce byte-identical serialized reports."""

    __slots__ = ("passed", "checks", "seconds")

    def __init__(self, checks, seconds):
        self.checks = list(checks)
        self.passed = all(ok for _, ok, _ in self.checks)
        self.seconds = seconds

    def failures(self):
        return [(name, wit) for name, ok, wit in self.checks if not ok]

    def serialize(self):
        out = {"passed": self.passed, "checks": []}
        for name, ok, wit in self.checks:
            entry = {"name": name, "passed": ok}
            if wit is not None:
                entry["witness"] = wit
            out["checks"].append(entry)
        return out


def verify_certificate(form, g, cert, det_refined=None):
    """Re-check a certificate against an independently supplied space and
    element.  Only (beta, h1, h2) are taken from the certificate; failures
    (including shape or field mismatches) become report entries."""
    t0 = time.perf_counter()
    refined = cert.det_refined if det_refined is None else bool(det_refined)
    checks = _checks(form, g, cert.beta, cert.h1, cert.h2, refined)
    return VerifyReport(checks, time.perf_counter() - t0)


def check_cert(cert):
    """Raise VerificationError on the first failing check; return the cert."""
    for name, ok in cert.checks():
        if not ok:
            raise VerificationError(name, {"cert": cert.serialize()})
    return cert


def oracle_involution_set(form, budget=10**7):
    """All twist-1 maps of ratio 1 squaring to the identity, in canonical
    order: the brute-force ground truth that any constructed h1 must hit."""
    eye = Mat.identity(form.tower, form.n)
    return [
        A
        for A in anti_unitary_enumerate(form, budget=budget)
        if A @ A.conj() == eye
    ]


def _det_label(F, d):
    if d == F.one:
        return "+1"
    if d == -F.one:
        return "-1"
    return str(d.serialize())


def survey(form, beta=None, sample=None, seed=0, refined=False, budget=10**7):
    """Factor and fully verify every similitude of ratio beta.

    Exhaustive enumeration when sample is None, else `sample` elements from
    the seeded generator walk.  The first failing certificate aborts with a
    VerificationError carrying the offending element and its transcript.
    Returns a JSON-ready summary: totals, failure count (always 0 on a
    normal return), block-case histogram, and det(h1) histogram."""
    from .factor import factor

    F = form.tower
    beta_elem = F.one if beta is None else form._as_elem(beta)
    if sample is None:
        elements = group_enumerate(form, beta_elem, budget=budget)
        mode = "exhaustive"
    else:
        elements = group_sample(form, beta_elem, seed=seed, count=int(sample))
        mode = {"sample": int(sample), "seed": int(seed)}
    total = 0
    cases = {}
    dets = {}
    for g in elements:
        cert = factor(form, g, det_refined=refined)
        report = verify_certificate(form, g, cert)
        if not report.passed:
            raise VerificationError(
                report.failures()[0][0],
                {
                    "g": g.serialize(),
                    "cert": cert.serialize(),
                    "report": report.serialize(),
                },
            )
        total += 1
        for blk in cert.blocks:
            cases[blk["case"]] = cases.get(blk["case"], 0) + 1
        label = _det_label(F, cert.h1.det())
        dets[label] = dets.get(label, 0) + 1
    return {
        "beta": beta_elem.serialize(),
        "cases": dict(sorted(cases.items())),
        "dets": dict(sorted(dets.items())),
        "failures": 0,
        "mode": mode,
        "refined": bool(refined),
        "total": total,
    }
