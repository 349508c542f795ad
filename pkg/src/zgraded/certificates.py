"""Serialisable certificates and their independent re-verification.

A certificate is a JSON document: schema version, task echo, verdict, the
input it talks about, and witness data as nested arrays of element strings.
Verification re-checks the defining identities of the witnesses (contraction
identities, inversion residuals, partition sums, unit-plus-negative shapes)
from the stored data; summary-style fields are recomputed and compared.
Verification is deterministic and side-effect-free.
"""

from __future__ import annotations

import json

from .complexes import (
    FreeChainComplex,
    R0Target,
    base_change,
    check_psp_contraction,
    parse_complex_text,
    verify_contraction,
    Contraction,
    DegreewiseMapFamily,
)
from .errors import SchemaError, ZGradedError
from .exprs import element_to_str, parse_element
from .matrices import RingMatrix
from .partitions import PartitionOfUnity, verify_partition
from .rings import truncate
from .series import in_tilde_omega_plus

SCHEMA_VERSION = 1


def matrix_payload(m: RingMatrix):
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [[element_to_str(e) for e in row] for row in m.entries],
    }


def payload_matrix(ring_ident, payload) -> RingMatrix:
    rows = payload["rows"]
    cols = payload["cols"]
    entries = [
        [parse_element(ring_ident, cell) for cell in row] for row in payload["entries"]
    ]
    if len(entries) != rows or any(len(r) != cols for r in entries):
        raise SchemaError("matrix payload shape mismatch")
    if rows == 0 or cols == 0:
        return RingMatrix.zero(ring_ident, rows, cols)
    return RingMatrix(ring_ident, rows, cols, entries)


def family_payload(fam: dict):
    return {str(n): matrix_payload(m) for n, m in sorted(fam.items())}


def payload_family(ring_ident, payload):
    return {int(n): payload_matrix(ring_ident, p) for n, p in payload.items()}


def pairs_payload(pou: PartitionOfUnity):
    return [[element_to_str(a), element_to_str(b)] for a, b in pou.pairs]


def envelope(task, ring_ident, verdict, **kw):
    doc = {
        "schema": SCHEMA_VERSION,
        "task": task,
        "ring": ring_ident,
        "verdict": "affirmative" if verdict else "negative",
    }
    doc.update(kw)
    return doc


def write_certificate(path, doc):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_certificate(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not a JSON certificate: {exc}") from None


# -- verification ----------------------------------------------------------------


def verify_certificate(doc) -> tuple[bool, list]:
    """Re-check a certificate document (or file path). Returns (ok, problems)."""
    if isinstance(doc, str):
        doc = load_certificate(doc)
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported certificate schema {doc.get('schema')!r}")
    task = doc.get("task")
    checker = _CHECKERS.get(task)
    if checker is None:
        raise SchemaError(f"unknown certificate task {task!r}")
    if doc.get("verdict") == "negative" and not doc.get("witness"):
        return True, []  # nothing to check
    try:
        problems = checker(doc)
    except ZGradedError as exc:
        problems = [f"verification error: {exc}"]
    except (KeyError, TypeError, ValueError) as exc:
        problems = [f"malformed witness: {exc!r}"]
    return (not problems, problems)


def _check_strong(doc):
    ring = doc["ring"]
    problems = []
    wit = doc["witness"]
    for n, key in ((1, "plus"), (-1, "minus")):
        pairs = [
            (parse_element(ring, a), parse_element(ring, b)) for a, b in wit[key]
        ]
        res = verify_partition(PartitionOfUnity(ring, n, pairs))
        if not res:
            problems.append(f"partition of type ({n},{-n}) fails: {res.problems}")
    return problems


def _check_nf(doc):
    ring = doc["ring"]
    problems = []
    value = parse_element(ring, doc["input"]["expr"])
    stored = parse_element(ring, doc["witness"]["normal_form"])
    if value != stored:
        problems.append("stored normal form disagrees with re-evaluation")
    if parse_element(ring, element_to_str(stored)) != stored:
        problems.append("stored normal form is not idempotent")
    return problems


def _check_invert_series(doc):
    ring = doc["ring"]
    order = doc["order"]
    mode = doc["input"]["mode"]
    problems = []
    m = payload_matrix(ring, doc["input"]["matrix"])
    inv = payload_matrix(ring, doc["witness"]["inverse"])
    lo, hi = (0, order) if mode == "nonneg" else (-order, 0)
    ident = RingMatrix.identity(ring, m.rows)
    for prod, tag in ((m * inv, "M X"), (inv * m, "X M")):
        clipped = prod.map_entries(lambda e: truncate(e, lo, hi))
        if clipped != ident:
            problems.append(f"residual {tag} != I through order {order}")
    return problems


def _check_r0_routes(doc):
    ring = doc["ring"]
    order = doc["order"]
    problems = []
    c = parse_complex_text(doc["input"]["complex"])
    wit = doc["witness"]
    sigma = payload_family(ring, wit["sigma"])
    c0 = base_change(c, R0Target())
    res = verify_contraction(c0, Contraction(DegreewiseMapFamily(sigma)))
    if not res:
        problems.append(f"sigma is not an R0 contraction: {res.problems}")
    s_plus = payload_family(ring, wit["s_plus"])
    for n, m in s_plus.items():
        if m.degree_slice(0) != m:
            problems.append(f"S+ at level {n} is not of degree 0")
    deltas = payload_family(ring, wit["delta"])
    for n, r in c.levels.items():
        if r == 0:
            continue
        s_n = s_plus.get(n, RingMatrix.zero(ring, c.rank(n + 1), r))
        s_prev = s_plus.get(n - 1, RingMatrix.zero(ring, r, c.rank(n - 1)))
        recomputed = c.diff(n + 1) * s_n + s_prev * c.diff(n)
        if deltas.get(n) != recomputed:
            problems.append(f"stored delta at level {n} != D S + S D")
            continue
        if not in_tilde_omega_plus(recomputed):
            problems.append(f"delta at level {n} has singular constant term")
    inverses = {int(n): payload_matrix(ring, p) for n, p in wit["delta_inverse"].items()}
    ident_of = lambda n: RingMatrix.identity(ring, deltas[n].rows)
    for n, inv in inverses.items():
        for prod in (deltas[n] * inv, inv * deltas[n]):
            clipped = prod.map_entries(lambda e: truncate(e, 0, order))
            if clipped != ident_of(n):
                problems.append(f"delta inverse residual fails at level {n}")
                break
    prime = payload_family(ring, wit["psp_contraction"])
    if not check_psp_contraction(c, prime, order):
        problems.append("series contraction identity d s' + s' d = id fails")
    if not all(wit["routes"].values()):
        problems.append("route flags are not all affirmative")
    return problems


def _check_half_torus(doc):
    from .resolution import half_torus

    c = parse_complex_text(doc["input"]["complex"])
    rep = half_torus(c, doc["horizon"])
    problems = []
    if bool(rep) != (doc["verdict"] == "affirmative"):
        problems.append("recomputed half-torus verdict disagrees")
    stored_dims = {int(k): v for k, v in doc["witness"]["cone_dims"].items()}
    if stored_dims != rep.cone_dims:
        problems.append("stored cone dimensions disagree with recomputation")
    return problems


def _check_fredholm(doc):
    from .domination import is_fredholm

    m = payload_matrix(doc["ring"], doc["input"]["matrix"])
    verdict = is_fredholm(m)
    wit = doc["witness"]
    problems = []
    if bool(verdict) != (doc["verdict"] == "affirmative"):
        problems.append("recomputed Fredholm verdict disagrees")
    if wit["m"] != verdict.suitable_m or wit["injective"] != verdict.injective:
        problems.append("stored shift or injectivity disagrees")
    if wit["total_dim"] != verdict.total_dim or wit["det_degree"] != verdict.oracle_det_degree:
        problems.append("stored dimensions disagree with recomputation")
    stored_dims = {int(k): v for k, v in wit["cokernel_dims"].items()}
    if stored_dims != {k: v for k, v in verdict.cokernel_dims.items()}:
        problems.append("stored cokernel layers disagree")
    return problems


def _check_findom(doc):
    from .domination import FinDomCertificate, check_findom_certificate
    from .series import InversionCertificate, SeriesMatrix, conegative_window

    ring = doc["ring"]
    order = doc["order"]
    c = parse_complex_text(doc["input"]["complex"])
    wit = doc["witness"]
    s_plus = payload_family(ring, wit["s_plus"])
    e = payload_family(ring, wit["e"])
    e_inverses = {}
    for n, p in wit["e_inverse"].items():
        m = payload_matrix(ring, p)
        sm = SeriesMatrix(ring, m.rows, m.cols, conegative_window(order), m)
        e_inverses[int(n)] = InversionCertificate(sm, order, True, "conegative")
    cert = FinDomCertificate(s_plus, e, e_inverses, order, True)
    res = check_findom_certificate(c, cert)
    return list(res.problems)


def _check_leavitt_example(doc):
    from .domination import leavitt_findom_example

    rep = leavitt_findom_example()
    problems = []
    if not rep["ok"]:
        problems.append("recomputed example fails")
    if doc["witness"]["checks"] != rep["checks"]:
        problems.append("stored check list disagrees with recomputation")
    return problems


_CHECKERS = {
    "check-strong": _check_strong,
    "nf": _check_nf,
    "invert-series": _check_invert_series,
    "r0-routes": _check_r0_routes,
    "half-torus": _check_half_torus,
    "fredholm": _check_fredholm,
    "findom": _check_findom,
    "leavitt-example": _check_leavitt_example,
}


# -- certificate builders (used by the CLI) ---------------------------------------


def build_check_strong(report, n_max):
    wit = {}
    if report.strongly_graded:
        plus, minus = report.witnesses
        wit = {"plus": pairs_payload(plus), "minus": pairs_payload(minus)}
    elif report.failure_degree is not None:
        wit = {}
    doc = envelope("check-strong", report.ring, report.strongly_graded, witness=wit)
    doc["input"] = {"nmax": n_max}
    if report.failure_degree is not None:
        doc["failure_degree"] = report.failure_degree
    return doc


def build_nf(ring_ident, expr_text, value):
    doc = envelope("nf", ring_ident, True, witness={"normal_form": element_to_str(value)})
    doc["input"] = {"expr": expr_text}
    return doc


def build_invert_series(ring_ident, m, mode, cert):
    doc = envelope(
        "invert-series",
        ring_ident,
        cert is not None and cert.residual_check,
        witness={"inverse": matrix_payload(cert.inverse.entries)} if cert else {},
    )
    doc["order"] = cert.order if cert else None
    doc["input"] = {"matrix": matrix_payload(m), "mode": mode}
    return doc


def build_invert_series_negative(ring_ident, m, mode, order, reason):
    doc = envelope("invert-series", ring_ident, False, witness={})
    doc["order"] = order
    doc["input"] = {"matrix": matrix_payload(m), "mode": mode}
    doc["reason"] = reason
    return doc


def build_r0_routes(c, report):
    affirmative = report.affirmative()
    wit = {}
    if affirmative and report.route2 is not None:
        r2 = report.route2
        wit = {
            "sigma": family_payload(report.route1.contraction.s.maps),
            "s_plus": family_payload(r2.s_plus),
            "delta": family_payload(r2.delta),
            "delta_inverse": {
                str(n): matrix_payload(cert.inverse.entries)
                for n, cert in sorted(r2.delta_inverses.items())
            },
            "psp_contraction": family_payload(r2.psp_contraction),
            "routes": {
                "r0": report.route1.contractible,
                "certificate": r2.identity_ok,
                "zeta": report.route4.quasi_iso,
            },
        }
    doc = envelope("r0-routes", c.ring, affirmative, witness=wit)
    doc["order"] = report.order
    doc["input"] = {"complex": _complex_text(c)}
    doc["agree"] = report.agree
    if not affirmative:
        doc["routes"] = {
            "r0": report.route1.contractible,
            "zeta": report.route4.quasi_iso,
        }
    return doc


def build_half_torus(c, rep):
    doc = envelope(
        "half-torus",
        c.ring,
        bool(rep),
        witness={"cone_dims": {str(k): v for k, v in rep.cone_dims.items()}},
    )
    doc["horizon"] = rep.horizon
    doc["input"] = {"complex": _complex_text(c)}
    return doc


def build_fredholm(m, verdict):
    doc = envelope(
        "fredholm",
        m.ring,
        bool(verdict),
        witness={
            "m": verdict.suitable_m,
            "injective": verdict.injective,
            "stabilized": verdict.stabilized,
            "cokernel_dims": {str(k): v for k, v in sorted(verdict.cokernel_dims.items())},
            "total_dim": verdict.total_dim,
            "det_degree": verdict.oracle_det_degree,
        },
    )
    doc["input"] = {"matrix": matrix_payload(m)}
    return doc


def build_findom(c, verdict, cert):
    wit = {}
    if cert is not None:
        wit = {
            "s_plus": family_payload(cert.s_plus),
            "e": family_payload(cert.e),
            "e_inverse": {
                str(n): matrix_payload(ic.inverse.entries)
                for n, ic in sorted(cert.e_inverses.items())
            },
        }
    doc = envelope("findom", c.ring, bool(verdict), witness=wit)
    doc["order"] = verdict.order
    doc["input"] = {"complex": _complex_text(c)}
    return doc


def build_leavitt_example(rep):
    doc = envelope("leavitt-example", "leavitt11", rep["ok"], witness={"checks": rep["checks"]})
    doc["input"] = {}
    return doc


def _complex_text(c: FreeChainComplex):
    from .complexes import complex_to_text

    return complex_to_text(c)
