"""Structure constants in the rank variable K.

The product of two T-basis elements, expanded back in the T-basis, has
coefficients that depend polynomially on the rank n.  Sampling the
expansion at enough ranks and interpolating therefore gives structure
constants over Q[t, k, K], where K stands for the generic rank.  The fit
starts from the degree bound |m1| + |m2| and is validated on a held-out
rank before a table is accepted; if the held-out rank disagrees, the bound
is raised and one more rank sampled, up to |m1| + |m2| plus the combined
weight.  (The larger degrees do occur: the scalar part of
T(1,1,E_12) T(1,1,E_21) is cubic in the rank even though the pair has only
two factors.)  Cached tables re-verify one randomly chosen stored rank
against the table's own specialization on every hit.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import random
import tempfile

from .cherednik import get_algebra
from .rings import ParamPoly, interpolate_in_K
from .spherical import (
    TIndex,
    expand_in_t_basis,
    expansion_from_obj,
    expansion_to_obj,
    t_basis_elem,
)

log = logging.getLogger(__name__)


class FitValidationFailed(Exception):
    """The interpolated table disagrees with a held-out rank."""


class CacheCorrupt(Exception):
    """A cached table failed its checksum or re-verification."""


def _rank_expansion(n, r, m1, m2):
    alg = get_algebra(n, r)
    return expand_in_t_basis(t_basis_elem(alg, m1) * t_basis_elem(alg, m2))


class StructureConstantTable:
    """Structure constants of T(m1) * T(m2) over Q[t, k, K]."""

    def __init__(self, r, m1, m2, entries, fit_meta):
        self.r = r
        self.m1 = m1
        self.m2 = m2
        self.entries = entries
        self.fit_meta = fit_meta

    def specialize(self, nu):
        """Substitute a concrete rank for K; drops vanishing entries."""
        out = {}
        for m, c in self.entries.items():
            s = c.subs_K(nu)
            if s:
                out[m] = s
        return out

    def to_obj(self):
        entries = [
            [m.to_obj(), str(self.entries[m])]
            for m in sorted(self.entries, key=TIndex.sort_key)
        ]
        return {
            "format": "structure-table/1",
            "r": self.r,
            "m1": self.m1.to_obj(),
            "m2": self.m2.to_obj(),
            "entries": entries,
            "fitMeta": self.fit_meta,
        }

    @classmethod
    def from_obj(cls, obj):
        if obj.get("format") != "structure-table/1":
            raise ValueError("unknown table format: %r" % obj.get("format"))
        entries = {}
        for idx_obj, coeff_str in obj["entries"]:
            entries[TIndex.from_obj(idx_obj)] = ParamPoly.parse(coeff_str)
        return cls(
            int(obj["r"]),
            TIndex.from_obj(obj["m1"]),
            TIndex.from_obj(obj["m2"]),
            entries,
            obj["fitMeta"],
        )

    def __eq__(self, other):
        return (
            isinstance(other, StructureConstantTable)
            and (self.r, self.m1, self.m2) == (other.r, other.m1, other.m2)
            and self.entries == other.entries
        )

    def __repr__(self):
        return "StructureConstantTable(r=%d, m1=%r, m2=%r, %d entries)" % (
            self.r,
            self.m1,
            self.m2,
            len(self.entries),
        )


def _compute_table(m1, m2, r):
    w = m1.weight + m2.weight
    degree_bound = m1.size + m2.size
    ceiling = degree_bound + w
    # every candidate entry has size <= |m1|+|m2|; a sampled rank below that
    # cannot express the largest indices (h-degree <= n), so start above both
    # the weight threshold and the size of the product
    n0 = max(2 * w + 2, m1.size + m2.size)
    per_rank = {}

    def rank_exp(n):
        if n not in per_rank:
            per_rank[n] = _rank_expansion(n, r, m1, m2)
        return per_rank[n]

    while True:
        sample_ranks = list(range(n0, n0 + degree_bound + 1))
        held_out = n0 + degree_bound + 1
        for n in sample_ranks:
            rank_exp(n)
        held_exp = rank_exp(held_out)

        indices = set()
        for n in sample_ranks:
            indices.update(per_rank[n])
        indices.update(held_exp)

        entries = {}
        failure = None
        for m in sorted(indices, key=TIndex.sort_key):
            samples = [(n, per_rank[n].get(m, ParamPoly.zero())) for n in sample_ranks]
            fit = interpolate_in_K(samples, degree_bound)
            predicted = fit.subs_K(held_out)
            if predicted != held_exp.get(m, ParamPoly.zero()):
                failure = (m, predicted, held_exp.get(m, ParamPoly.zero()))
                break
            if fit:
                entries[m] = fit
        if failure is None:
            break
        if degree_bound >= ceiling:
            m, predicted, direct = failure
            raise FitValidationFailed(
                "held-out rank n=%d disagrees at index %r even at the degree "
                "ceiling %d: fit gives %s, direct computation gives %s"
                % (held_out, m, ceiling, predicted, direct)
            )
        log.info(
            "degree bound %d rejected at held-out rank %d for (%r, %r); retrying "
            "with %d",
            degree_bound,
            held_out,
            m1,
            m2,
            degree_bound + 1,
        )
        degree_bound += 1

    rank_data = [
        {"rank": n, "expansion": expansion_to_obj(per_rank[n])} for n in sample_ranks
    ]
    rank_data.append({"rank": held_out, "expansion": expansion_to_obj(held_exp)})
    fit_meta = {
        "sampleRanks": sample_ranks,
        "heldOutRank": held_out,
        "degreeBoundK": degree_bound,
        "rankData": rank_data,
    }
    return StructureConstantTable(r, m1, m2, entries, fit_meta)


# ---------------------------------------------------------------------------
# Cache layer
# ---------------------------------------------------------------------------

def _table_key_obj(m1, m2, r):
    return {"m1": m1.to_obj(), "m2": m2.to_obj(), "r": r}


def _canonical_dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def table_cache_path(cache_dir, m1, m2, r):
    digest = hashlib.sha256(
        _canonical_dumps(_table_key_obj(m1, m2, r)).encode()
    ).hexdigest()
    return os.path.join(cache_dir, "sct-%s.json" % digest[:32])


def _write_table(path, table):
    payload = table.to_obj()
    wrapped = dict(payload)
    wrapped["checksum"] = hashlib.sha256(_canonical_dumps(payload).encode()).hexdigest()
    os.makedirs(os.path.dirname(path), exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(wrapped, fh, sort_keys=True, indent=1)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_table(path, expected_key=None):
    """Read a cached table, checking its checksum.  Raises CacheCorrupt."""
    try:
        with open(path) as fh:
            wrapped = json.load(fh)
    except (OSError, ValueError) as exc:
        raise CacheCorrupt("unreadable cache file %s: %s" % (path, exc))
    stored_sum = wrapped.pop("checksum", None)
    actual = hashlib.sha256(_canonical_dumps(wrapped).encode()).hexdigest()
    if stored_sum != actual:
        raise CacheCorrupt("checksum mismatch in %s" % path)
    table = StructureConstantTable.from_obj(wrapped)
    if expected_key is not None:
        key = _table_key_obj(table.m1, table.m2, table.r)
        if _canonical_dumps(key) != _canonical_dumps(expected_key):
            raise CacheCorrupt("cache file %s holds a different table" % path)
    return table


def _verify_stored_rank(table, rng):
    """Specialize the table at one randomly chosen stored rank and compare
    with the per-rank expansion kept in fitMeta; CacheCorrupt on mismatch."""
    rank_data = table.fit_meta.get("rankData") or []
    if not rank_data:
        raise CacheCorrupt("cached table carries no per-rank data")
    entry = rng.choice(rank_data)
    n = int(entry["rank"])
    stored = expansion_from_obj(entry["expansion"])
    if table.specialize(n) != stored:
        raise CacheCorrupt(
            "table (%r, %r) does not reproduce its stored rank n=%d"
            % (table.m1, table.m2, n)
        )


def structure_constants(m1, m2, r, cache_dir=None, rng=None):
    """Structure-constant table for T(m1) * T(m2) at rank r labels.

    With cache_dir set, tables are stored as checksummed JSON; a cache hit
    re-verifies one randomly chosen stored rank, and any corruption evicts
    the file and recomputes.
    """
    if not isinstance(m1, TIndex):
        m1 = TIndex(m1)
    if not isinstance(m2, TIndex):
        m2 = TIndex(m2)
    if cache_dir is None:
        return _compute_table(m1, m2, r)
    path = table_cache_path(cache_dir, m1, m2, r)
    if os.path.exists(path):
        try:
            table = load_table(path, expected_key=_table_key_obj(m1, m2, r))
            _verify_stored_rank(table, rng or random.Random())
            return table
        except CacheCorrupt as exc:
            log.warning("evicting corrupt cache entry: %s", exc)
            try:
                os.unlink(path)
            except OSError:
                pass
    table = _compute_table(m1, m2, r)
    _write_table(path, table)
    return table


def specialize(table, nu):
    """Structure constants at the concrete rank nu (substitutes K)."""
    return table.specialize(nu)


def project_to_finite_rank(algebra, expr):
    """Evaluate a {TIndex: ParamPoly} expression at the algebra's own rank:
    K is substituted by n and each index becomes its T-basis element."""
    from .spherical import SphericalElement

    total = SphericalElement.zero(algebra)
    for m, c in expr.items():
        total = total + t_basis_elem(algebra, m).scale(c.subs_K(algebra.n))
    return total
