"""Command-line driver: classes, products, expansions, tables and checks.

Every command takes ``--type``, ``--fgl``, ``--prec``, ``--window``,
``--format`` and ``--out``.  The ``verify`` command exits with status 1 when
any check fails.
"""

from __future__ import annotations

import functools
import itertools
import json
import os
import sys

import click

from .algebra import EXACT, NotDivisible, Poly, TruncatedSeries, format_coefficient
from .fgl import KINDS, fgl_build, verify_fgl_axioms, verify_fgl_identities
from .momentgraph import (MomentGraphModel, Section, TensorElement, WindowError, format_root,
                          gkm_check, phi)
from .nilhecke import verify_operator_identities
from .rank2 import PRODUCTS, Terms, check_expansion, difference_closed_form
from .rootdata import DATA, parse_word
from .schubert import (SINGULAR_LOCI, Unsupported, bott_samelson, bs_minus_schubert,
                       expand_in_basis, naive_pushforward, pieri_chevalley, schubert_basis,
                       schubert_class, schubert_product)

DEFAULT_PREC = 8
MIN_PREC = 4


@functools.lru_cache(maxsize=None)
def _law(kind, order):
    return fgl_build(kind, order)


@functools.lru_cache(maxsize=None)
def get_model(datum, kind, order, window=None):
    """One model per (datum, law, precision, window), so bases are built once."""
    return MomentGraphModel(datum, _law(kind, order), window=window)


# rendering


def _element_name(w, fmt):
    if fmt == "latex":
        return "".join(f"s_{i}" for i in w.word) or "1"
    return str(w)


def factor_roots(model, series):
    """Split off factors y_{-beta} (beta > 0) while the cofactor is not a unit."""
    if series.is_zero():
        return [], series
    found = []
    rest = series
    progress = True
    while progress and not rest.constant_term() and not rest.is_zero():
        progress = False
        for beta, _ in model.datum.positive_roots(model.window_length if not model.datum.finite else None):
            if rest.constant_term():
                break
            try:
                q = rest.div_exact(model.y_neg(beta))
            except NotDivisible:
                continue
            found.append(beta)
            rest = q
            progress = True
    if rest.constant_term() or rest.is_zero():
        return found, rest
    return [], series


def _latex_coefficient(c):
    if isinstance(c, Poly):
        parts = []
        for mono in sorted(c.terms):
            q = c.terms[mono]
            syms = "".join(f"m_{{{i + 1}}}" + (f"^{{{e}}}" if e > 1 else "") for i, e in enumerate(mono) if e)
            parts.append((q, syms))
        return parts
    return [(c, "")]


def _latex_rational(q, first):
    q = format_coefficient(q)
    neg = q.startswith("-")
    q = q.lstrip("-")
    if "/" in q:
        a, b = q.split("/")
        q = f"\\tfrac{{{a}}}{{{b}}}"
    sign = "-" if neg else ("" if first else "+")
    return sign, q


def series_latex(series, names):
    if series.is_zero():
        out = "0"
    else:
        pieces = []
        for e, c in series.sorted_terms():
            mono = "".join(n if k == 1 else f"{n}^{{{k}}}" for n, k in zip(names, e) if k)
            for q, syms in _latex_coefficient(c):
                sign, mag = _latex_rational(q, not pieces)
                if mag == "1" and (syms or mono):
                    mag = ""
                pieces.append(f"{sign}{mag}{syms}{mono}")
        out = " ".join(pieces)
    if series.prec < EXACT:
        out += f" + O({series.prec})"
    return out


def series_text(series, names):
    out = series.to_text(names).replace("+-", "-")
    if series.prec < EXACT:
        out += f" + O({series.prec})"
    return out


class Renderer:
    """Formats series and sections for one model and output format."""

    def __init__(self, model, fmt, requested):
        self.model = model
        self.fmt = fmt
        self.requested = requested
        finite = model.datum.finite
        if fmt == "latex":
            self.names = ["y_{\\omega_1}", "y_{\\omega_2}"] if finite else ["y_{\\alpha_1}", "y_{\\alpha_2}"]
        else:
            self.names = ["y_w1", "y_w2"] if finite else ["y_a1", "y_a2"]

    def clip(self, series):
        """Keep ``requested`` degrees beyond the leading term."""
        if series.is_zero():
            return series.truncate(min(series.prec, self.requested))
        limit = self.requested + series.valuation
        return series.truncate(limit) if series.prec > limit else series

    def series(self, series):
        series = self.clip(series)
        if series.is_zero():
            return "0"
        roots, rest = factor_roots(self.model, series)
        if self.fmt == "latex":
            head = "".join(f"y_{{{self._root_latex(b)}}}" for b in roots)
            body = series_latex(rest, self.names)
        else:
            head = "*".join(f"y_{{{format_root(self.model.datum, b, negate=True)}}}" for b in roots)
            body = series_text(rest, self.names)
        if not roots:
            return body
        if rest.prec >= EXACT and rest.terms == {(0, 0): 1}:
            return head
        joiner = " " if self.fmt == "latex" else "*"
        return f"{head}{joiner}({body})"

    def _root_latex(self, beta):
        text = format_root(self.model.datum, beta, negate=True)
        return text.replace("a1", "\\alpha_1").replace("a2", "\\alpha_2")

    def series_json(self, series):
        return self.clip(series).to_json()


# configuration


def _common(f):
    f = click.option("--out", "out", type=click.Path(dir_okay=False, writable=True), default=None,
                     help="Write output to PATH instead of stdout.")(f)
    f = click.option("--format", "fmt", type=click.Choice(["text", "json", "latex"]), default="text",
                     show_default=True)(f)
    f = click.option("--window", type=click.IntRange(min=1), default=None,
                     help="Window length (A1aff only; default 6).")(f)
    f = click.option("--prec", type=click.IntRange(min=MIN_PREC), envvar="SCHUBFGL_PREC",
                     default=DEFAULT_PREC, show_default=True, help="Truncation degree.")(f)
    f = click.option("--fgl", "kind", type=click.Choice(KINDS), default="universal", show_default=True)(f)
    f = click.option("--type", "datum", type=click.Choice(DATA), default="A2", show_default=True)(f)
    return f


class Job:
    def __init__(self, datum, kind, prec, window, fmt, out):
        if datum == "A1aff" and window is None:
            window = 6
        self.datum, self.kind, self.prec, self.window = datum, kind, prec, window
        self.fmt, self.out = fmt, out
        self.notices = []

    def model(self, order=None):
        return get_model(self.datum, self.kind, order or self.prec, self.window)

    def renderer(self, model):
        return Renderer(model, self.fmt, self.prec)

    def emit(self, text):
        if self.out:
            with open(self.out, "w") as fh:
                fh.write(text)
        else:
            click.echo(text, nl=False)
        for line in self.notices:
            click.echo(line, err=True)


def _dump(data):
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def _fail(message):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _precision_of(values):
    precs = [v.prec for v in values]
    return min(precs) if precs else EXACT


def with_auto_precision(job, compute, measure):
    """Run ``compute(model)``, raising the order until the output reaches the requested degree.

    The order never exceeds prec + l(w0) + 2.  A notice is printed when it is raised.
    """
    datum = job.model().datum
    extra = (datum.longest.length if datum.finite else (job.window or 6)) + 2
    ceiling = job.prec + extra
    order = job.prec
    while True:
        result = compute(job.model(order))
        got = measure(result)
        if got >= job.prec or order >= ceiling:
            break
        order = min(ceiling, order + (job.prec - got))
    if order > job.prec:
        job.notices.append(f"note: working precision raised to {order} for output degree {job.prec}")
    if got < job.prec:
        job.notices.append(f"note: output is only reliable below degree {got}")
    return result, job.model(order)


# section rendering


def render_section(job, model, section, title):
    r = job.renderer(model)
    rows = [(w, section[w]) for w in model.window]
    if job.fmt == "json":
        data = {"title": title, "datum": model.datum.name, "fgl": job.kind, "prec": job.prec,
                "window": [str(w) for w in model.window],
                "values": {str(w): r.series_json(v) for w, v in rows if not v.is_zero()}}
        return _dump(data)
    if job.fmt == "latex":
        lines = [f"% {title}", "\\begin{align*}"]
        for w, v in rows:
            lines.append(f"  ({title})_{{{_element_name(w, 'latex')}}} &= {r.series(v)} \\\\")
        lines.append("\\end{align*}")
        return "\n".join(lines) + "\n"
    width = max(len(str(w)) for w, _ in rows)
    lines = [title]
    for w, v in rows:
        lines.append(f"  {str(w).ljust(width)}  {r.series(v)}")
    return "\n".join(lines) + "\n"


def render_expansion(job, model, result, title):
    r = job.renderer(model)
    items = [(w, c) for w, c in sorted(result.nonzero().items(), key=lambda kv: (-kv[0].length, kv[0]))]
    if job.fmt == "json":
        data = {"title": title, "datum": model.datum.name, "fgl": job.kind, "prec": job.prec,
                "coefficients": {str(w): r.series_json(c) for w, c in items},
                "residual": result.residual, "diagnostics": result.diagnostics}
        return _dump(data)
    if job.fmt == "latex":
        terms = [f"\\big({r.series(c)}\\big)[X_{{{_element_name(w, 'latex')}}}]" for w, c in items] or ["0"]
        body = " \\\\\n  &\\quad + ".join(terms)
        lines = ["\\begin{align*}", f"  {title} &= {body}"]
        if result.residual:
            lines.append("  % residual: the expansion did not terminate cleanly")
        lines.append("\\end{align*}")
        return "\n".join(lines) + "\n"
    lines = [title]
    for w, c in items:
        lines.append(f"  [X_{w}]  {r.series(c)}")
    if not items:
        lines.append("  0")
    if result.residual:
        lines.append(f"  residual: {json.dumps(result.diagnostics)}")
    return "\n".join(lines) + "\n"


# verification suites; each returns a list of {"check", "status", ...} entries


def _entries_from_report(report, prefix=""):
    out = []
    for e in report:
        out.append({"check": prefix + e["identity"], "status": e["status"],
                    "precision": e.get("precision"), "first_fail_degree": e.get("first_fail_degree")})
    return out


def suite_fgl(model):
    law = model.law
    return (_entries_from_report(verify_fgl_axioms(law), "axiom: ")
            + _entries_from_report(verify_fgl_identities(law), "identity: "))


PROBE_GRID = tuple(itertools.product((-1, 0, 1), repeat=2))


def _gkm_entry(name, section):
    try:
        result = gkm_check(section)
    except NotDivisible as exc:
        return {"check": name, "status": "fail", "first_fail_degree": exc.degree}
    status = "pass" if result["passed"] else "fail"
    entry = {"check": name, "status": status}
    if result["failures"]:
        entry["failures"] = result["failures"]
    return entry


def suite_gkm(model, max_word=4):
    out = []
    for lam in PROBE_GRID:
        section = phi(model, TensorElement.of(model.one(), model.y(lam)))
        out.append(_gkm_entry(f"phi(1 (x) y_{lam})", section))
    if not model.datum.finite:
        return out
    for k in range(1, max_word + 1):
        for word in itertools.product((1, 2), repeat=k):
            name = "Z_" + "".join(map(str, word))
            try:
                section = bott_samelson(model, word)
            except NotDivisible as exc:
                out.append({"check": name, "status": "fail", "first_fail_degree": exc.degree})
                continue
            out.append(_gkm_entry(name, section))
    for w in model.window:
        try:
            section = schubert_class(model, w)
        except Unsupported:
            continue
        out.append(_gkm_entry(f"X_{w}", section))
    return out


def suite_operators(model):
    return _entries_from_report(verify_operator_identities(model))


def suite_products(model):
    """Compare Schubert products with the closed-form product list."""
    datum = model.datum
    if datum.name not in ("A2", "B2", "G2"):
        raise click.UsageError("the product list is for the finite types A2, B2, G2")
    terms = Terms(model)
    basis = schubert_basis(model)
    out = []
    for (u, v), formula in PRODUCTS.items():
        name = f"[X_{u}][X_{v}]"
        wu, wv = datum.element(u), datum.element(v)
        if datum.name == "A2" and wu == wv == datum.longest and u != v:
            out.append({"check": name, "status": "skip", "reason": "s1s2s1 = s2s1s2 in A2"})
            continue
        try:
            result = schubert_product(basis, wu, wv)
            bad = check_expansion(terms, result, formula(terms))
        except (Unsupported, NotDivisible) as exc:
            out.append({"check": name, "status": "fail", "error": str(exc)})
            continue
        entry = {"check": name, "status": "fail" if bad else "pass"}
        if bad:
            entry["mismatch"] = bad
        out.append(entry)
    return out


def suite_differences(model):
    """[Z_121] - [X_s1s2s1] and [Z_212] - [X_s2s1s2] against their closed forms."""
    datum = model.datum
    if not datum.finite:
        raise click.UsageError("Bott-Samelson classes need a finite type")
    terms = Terms(model)
    out = []
    for case in ("212", "121"):
        name = f"Z_{case} - X_" + "".join(f"s{c}" for c in case)
        diff = bs_minus_schubert(model, case)
        if model.law.kind != "universal":
            support = diff.support()
            out.append({"check": name + " = 0", "status": "fail" if support else "pass",
                        **({"support": [str(w) for w in support]} if support else {})})
            continue
        coeff, w = difference_closed_form(terms, case)
        cls = schubert_class(model, w)
        bad = []
        for v in model.window:
            if (coeff * cls[v]).first_difference(diff[v]) is not None:
                bad.append(str(v))
        entry = {"check": f"{name} = closed form [X_{w}]", "status": "fail" if bad else "pass"}
        if bad:
            entry["mismatch"] = bad
        out.append(entry)
    return out


def suite_gkm_oops(model):
    """The uncorrected B2 class of X_s1s2s1 fails GKM only at e -- s2; with N it passes."""
    datum = model.datum
    if datum.name != "B2":
        raise click.UsageError("gkm-oops is a B2 check")
    naive = gkm_check(naive_pushforward(model, "s1s2s1"))
    failed = [f["edge"] for f in naive["failures"]]
    first = {"check": "naive X_s1s2s1 fails GKM exactly at e -- s2",
             "status": "pass" if failed == [["e", "s2"]] else "fail",
             "failing_edges": failed}
    corrected = _gkm_entry("X_s1s2s1 with N passes GKM", schubert_class(model, "s1s2s1"))
    return [first, corrected]


SUITES = {
    "fgl": suite_fgl,
    "gkm": suite_gkm,
    "operators": suite_operators,
    "products": suite_products,
    # older names of the same two suites
    "section8": suite_operators,
    "table7": suite_products,
    "differences": suite_differences,
    "gkm-oops": suite_gkm_oops,
}


def render_report(job, suite, entries):
    if job.fmt == "json":
        return _dump({"suite": suite, "datum": job.datum, "fgl": job.kind, "prec": job.prec,
                      "passed": all(e["status"] != "fail" for e in entries), "checks": entries})
    lines = []
    for e in entries:
        extra = ""
        if e.get("first_fail_degree") is not None:
            extra = f" (first difference in degree {e['first_fail_degree']})"
        elif e.get("failing_edges"):
            extra = f" (edges {', '.join('--'.join(x) for x in e['failing_edges'])})"
        elif e.get("mismatch"):
            extra = f" (differs at {', '.join(e['mismatch'])})"
        elif e.get("failures"):
            extra = " (" + ", ".join(f"{'--'.join(f['edge'])} label {f['label']}" for f in e["failures"]) + ")"
        lines.append(f"{e['status'].upper():4}  {e['check']}{extra}")
    failed = sum(e["status"] == "fail" for e in entries)
    lines.append(f"{suite}: {len(entries) - failed} of {len(entries)} checks without failure")
    if job.fmt == "latex":
        return "% " + "\n% ".join(lines) + "\n"
    return "\n".join(lines) + "\n"


# commands


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Equivariant Schubert calculus for rank-2 flag varieties over a formal group law."""


def _word_element(model, text):
    try:
        return model.datum.element(parse_word(text))
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc


def _unsupported_message(model, exc):
    loci = SINGULAR_LOCI.get(model.datum.name, {})
    listing = ", ".join(
        f"X_{model.datum.element(w)} (singular along X_{model.datum.element(s)})" for w, s in sorted(loci.items()))
    extra = f"; singular Schubert varieties in {model.datum.name}: {listing}" if listing else ""
    return f"{exc}{extra}"


@main.command("class")
@click.argument("mode", type=click.Choice(["schubert", "bottsamelson"]))
@click.argument("word")
@_common
def cmd_class(mode, word, datum, kind, prec, window, fmt, out):
    """Print a Schubert or Bott-Samelson class vertex by vertex."""
    job = Job(datum, kind, prec, window, fmt, out)
    model = job.model()
    try:
        if mode == "schubert":
            w = _word_element(model, word)
            section, title = schubert_class(model, w), f"[X_{w}]"
        else:
            letters = parse_word(word)
            section = bott_samelson(model, letters)
            title = "[Z_" + ("".join(map(str, letters)) or "pt") + "]"
    except Unsupported as exc:
        _fail(_unsupported_message(model, exc))
    except (WindowError, ValueError) as exc:
        _fail(str(exc))
    job.emit(render_section(job, model, section, title))


@main.command("product")
@click.argument("u")
@click.argument("v")
@_common
def cmd_product(u, v, datum, kind, prec, window, fmt, out):
    """Expand [X_u][X_v] in the Schubert basis."""
    job = Job(datum, kind, prec, window, fmt, out)

    def compute(model):
        basis = schubert_basis(model)
        return schubert_product(basis, _word_element(model, u), _word_element(model, v))

    try:
        result, model = with_auto_precision(job, compute, lambda r: _precision_of(r.nonzero().values()))
    except Unsupported as exc:
        _fail(_unsupported_message(job.model(), exc))
    wu, wv = (_element_name(_word_element(model, w), job.fmt) for w in (u, v))
    title = f"[X_{{{wu}}}][X_{{{wv}}}]" if job.fmt == "latex" else f"[X_{wu}][X_{wv}]"
    job.emit(render_expansion(job, model, result, title))
    if result.residual:
        sys.exit(1)


@main.command("expand")
@click.option("--bs", "bs_word", default=None, help="Expand the Bott-Samelson class of WORD.")
@click.option("--pieri", nargs=2, default=None, metavar="WEIGHT W",
              help="Expand x_WEIGHT [X_W]; WEIGHT as 'a,b' in the lattice basis.")
@click.option("--file", "path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Expand a section stored as JSON.")
@_common
def cmd_expand(bs_word, pieri, path, datum, kind, prec, window, fmt, out):
    """Expand a section in the Schubert basis."""
    chosen = [x is not None for x in (bs_word, pieri, path)]
    if sum(chosen) != 1:
        raise click.UsageError("give exactly one of --bs, --pieri, --file")
    job = Job(datum, kind, prec, window, fmt, out)

    def compute(model):
        basis = schubert_basis(model)
        if bs_word is not None:
            return expand_in_basis(bott_samelson(model, parse_word(bs_word)), basis)
        if pieri is not None:
            weight = tuple(int(c) for c in pieri[0].split(","))
            return pieri_chevalley(basis, weight, _word_element(model, pieri[1]))
        with open(path) as fh:
            section = Section.from_json(model, json.load(fh))
        return expand_in_basis(section, basis)

    if bs_word is not None:
        title = f"[Z_{''.join(map(str, parse_word(bs_word)))}]"
    elif pieri is not None:
        title = f"x_({pieri[0]}) [X_{pieri[1]}]"
    else:
        title = os.path.basename(path)
    try:
        if path is not None:
            result, model = compute(job.model()), job.model()
        else:
            result, model = with_auto_precision(job, compute, lambda r: _precision_of(r.nonzero().values()))
    except Unsupported as exc:
        _fail(_unsupported_message(job.model(), exc))
    except (WindowError, ValueError, KeyError) as exc:
        _fail(str(exc))
    job.emit(render_expansion(job, model, result, title))
    if result.residual:
        sys.exit(1)


@main.command("table")
@click.argument("kind_", metavar="KIND", type=click.Choice(["classes", "products"]))
@click.option("--max-length", type=int, default=None, help="Only classes of length at most this.")
@_common
def cmd_table(kind_, max_length, datum, kind, prec, window, fmt, out):
    """All Schubert classes, or all pairwise products, of one model."""
    job = Job(datum, kind, prec, window, fmt, out)
    model = job.model()
    if not model.datum.finite:
        _fail("Schubert classes need a finite type")
    elements = [w for w in model.window if max_length is None or w.length <= max_length]
    if kind_ == "classes":
        job.emit(_classes_table(job, model, elements))
        return
    basis = schubert_basis(model)
    supported = [w for w in elements if w in basis]
    chunks = []
    data = []
    for u, v in itertools.combinations_with_replacement(supported, 2):
        result = schubert_product(basis, u, v)
        if job.fmt == "json":
            data.append(json.loads(render_expansion(job, model, result, f"[X_{u}][X_{v}]")))
        else:
            title = (f"[X_{{{_element_name(u, 'latex')}}}][X_{{{_element_name(v, 'latex')}}}]"
                     if job.fmt == "latex" else f"[X_{u}][X_{v}]")
            chunks.append(render_expansion(job, model, result, title))
    skipped = [str(w) for w in elements if w not in supported]
    if job.fmt == "json":
        job.emit(_dump({"datum": datum, "fgl": kind, "prec": prec, "products": data, "unsupported": skipped}))
    else:
        if skipped:
            lead = "% " if job.fmt == "latex" else ""
            chunks.append(f"{lead}unsupported classes: {', '.join(skipped)}\n")
        job.emit("".join(chunks))


def _classes_table(job, model, elements):
    basis = schubert_basis(model)
    chunks, data = [], {}
    for w in elements:
        try:
            section = basis[w]
        except Unsupported as exc:
            if job.fmt == "json":
                data[str(w)] = {"unsupported": str(exc)}
            else:
                lead = "% " if job.fmt == "latex" else ""
                chunks.append(f"{lead}[X_{w}] unsupported: {exc}\n")
            continue
        if job.fmt == "json":
            data[str(w)] = json.loads(render_section(job, model, section, f"[X_{w}]"))["values"]
        else:
            title = f"[X_{{{_element_name(w, 'latex')}}}]" if job.fmt == "latex" else f"[X_{w}]"
            chunks.append(render_section(job, model, section, title))
    if job.fmt == "json":
        return _dump({"datum": model.datum.name, "fgl": job.kind, "prec": job.prec,
                      "window": [str(w) for w in model.window], "classes": data})
    return "".join(chunks)


@main.command("verify")
@click.argument("suite", type=click.Choice(sorted(SUITES)))
@_common
def cmd_verify(suite, datum, kind, prec, window, fmt, out):
    """Run a verification suite; exit status 1 if any check fails."""
    job = Job(datum, kind, prec, window, fmt, out)
    entries = SUITES[suite](job.model())
    job.emit(render_report(job, suite, entries))
    if any(e["status"] == "fail" for e in entries):
        sys.exit(1)


if __name__ == "__main__":
    main()
