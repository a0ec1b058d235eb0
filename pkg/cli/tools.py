import itertools
from collections import Counter
from functools import partial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import anyio
from anyio import CapacityLimiter, to_thread
from loguru import logger

from cli.cache import CacheStore
from cli.models import JobConfig, Table, prime_label
from config import MAX_WORKERS
from coxeter.models import CoxeterElement, CoxeterSystem, Kind, Side
from coxeter.tools import bruhat_leq, coset_members, coset_minimal, enumerate_up_to_length
from exceptions import CacheCorruptionError, ConsistencyError, InvalidInputError, PCanonError
from fock.models import CrystalOp, FockOp, Multicharge, Multipartition
from fock.tools import (
    apply_word, crystal, enumerate_multipartitions, fock_apply, fock_to_wedge, heights_charge, sigma, signature,
    wedge_apply,
)
from hecke.tools import bs_character, kl_basis, standard_pairing
from mult.models import MultiplicityQuery, MultiplicityResult
from mult.tools import hecke_decomposition_number, schur_decomposition_number
from soergel.models import PCanonicalEntry
from soergel.tools import double_leaves_count, p_canonical
from weights.tools import (
    bubble, bubble_by_trace, dot_poly, f_string, grassmannian_check, littelmann_F, make_weight, stabilizer,
    standard_family, verify_dot_properties,
)


async def _fan_out(jobs: Sequence[Callable[[], Any]]) -> List[Any]:
    """Run independent jobs on worker threads; results and the first error come back in job order."""
    limiter = CapacityLimiter(max(1, MAX_WORKERS))
    outcomes: List[Tuple[bool, Any]] = [(True, None)] * len(jobs)

    async def run(index: int, job: Callable[[], Any]) -> None:
        try:
            outcomes[index] = (True, await to_thread.run_sync(job, limiter=limiter))
        except Exception as e:
            outcomes[index] = (False, e)

    async with anyio.create_task_group() as tg:
        for index, job in enumerate(jobs):
            tg.start_soon(run, index, job)
    for ok, value in outcomes:
        if not ok:
            raise value
    return [value for _, value in outcomes]


def _failure(what: str, e: PCanonError) -> Dict[str, Any]:
    logger.error(f"Error {what} ({type(e).__name__}): {e}")
    if isinstance(e, InvalidInputError):
        return {"error": "Invalid input", "details": str(e), "exit_code": e.exit_code}
    if isinstance(e, CacheCorruptionError):
        return {"error": "Cache corruption", "details": str(e), "exit_code": e.exit_code}
    if isinstance(e, ConsistencyError):
        return {"error": "Consistency check failed", "details": str(e), "exit_code": e.exit_code}
    return {"error": "Computation failed", "details": str(e), "exit_code": e.exit_code}


def _unexpected(what: str, e: Exception) -> Dict[str, Any]:
    logger.error(f"Error {what} (Exception): {e}")
    return {"error": f"An unexpected error occurred: {str(e)}", "exit_code": 1}


# ============= BASIS TABLES =============

def _pcanonical_job(store: Optional[CacheStore], system: CoxeterSystem, w: CoxeterElement,
                    p: Optional[int]) -> PCanonicalEntry:
    if store is not None:
        cached = store.get(w, p)
        if cached is not None:
            return cached
    entry = p_canonical(system, w, p)
    if store is not None:
        store.put(entry)
    return entry


def basis_table(entries: Sequence[PCanonicalEntry]) -> Table:
    """One record per element; flat rows carry one monomial each."""
    table = Table(["p", "word", "target", "coeff", "v_power"])
    for entry in entries:
        terms = sorted(entry.expansion.items(), key=lambda kv: kv[0])
        table.records.append({
            "p": prime_label(entry.prime),
            "word": list(entry.element.word),
            "expansion": [[list(x.word), c.to_pairs()] for x, c in terms],
        })
        for x, c in terms:
            for coeff, power in c.to_pairs():
                table.rows.append([prime_label(entry.prime), str(entry.element), str(x), coeff, power])
    return table


async def cmd_pcan(config: JobConfig) -> Dict[str, Any]:
    """
    Tabulates p-canonical basis elements up to a length bound.

    Args:
        config: Needs kind, rank, primes and max_length; the cache directory is used unless disabled.

    Returns:
        A dictionary with the table, or an error dictionary.
    """
    try:
        system = config.system
        store = CacheStore(config.cache_dir) if config.use_cache else None
        elements = list(enumerate_up_to_length(system, config.max_length))
        logger.info(f"pcan: {len(elements)} elements of {system} for p in {[prime_label(p) for p in config.primes]}")
        jobs = [partial(_pcanonical_job, store, system, w, p) for p in config.primes for w in elements]
        entries = await _fan_out(jobs)
        logger.info(f"pcan: finished {len(entries)} entries")
        return {"table": basis_table(entries)}
    except PCanonError as e:
        return _failure("computing p-canonical table", e)
    except Exception as e:
        return _unexpected("computing p-canonical table", e)


async def cmd_klpoly(config: JobConfig) -> Dict[str, Any]:
    """Kazhdan-Lusztig basis up to a length bound, straight from the Hecke algebra recursion."""
    try:
        system = config.system
        elements = list(enumerate_up_to_length(system, config.max_length))
        logger.info(f"klpoly: {len(elements)} elements of {system}")
        expansions = await _fan_out([partial(kl_basis, w) for w in elements])
        return {"table": basis_table([PCanonicalEntry(w, None, b) for w, b in zip(elements, expansions)])}
    except PCanonError as e:
        return _failure("computing Kazhdan-Lusztig table", e)
    except Exception as e:
        return _unexpected("computing Kazhdan-Lusztig table", e)


# ============= DECOMPOSITION NUMBERS =============

def _mult_job(config: JobConfig, lam: Multipartition, mu: Multipartition, p: Optional[int],
              hecke: bool) -> MultiplicityResult:
    query = MultiplicityQuery(lam, mu, config.e, tuple(config.charges), tuple(config.m_vector), p)
    return hecke_decomposition_number(query, config.order) if hecke else schur_decomposition_number(query)


def mult_table(results: Sequence[MultiplicityResult]) -> Table:
    table = Table(["p", "lambda", "mu", "value", "orbit", "conditional", "alpha", "beta"])
    for r in results:
        q = r.query
        orbit = "same" if r.orbits_match else "different"
        table.records.append({
            "p": prime_label(q.p), "lambda": str(q.lam), "mu": str(q.mu), "value": r.value, "orbit": orbit,
            "conditional": r.conditional,
            "alpha": None if r.alpha is None else list(r.alpha.word),
            "beta": None if r.beta is None else list(r.beta.word),
        })
        table.rows.append([prime_label(q.p), str(q.lam), str(q.mu), r.value, orbit, r.conditional,
                           r.alpha, r.beta])
    return table


async def _cmd_mult(config: JobConfig, hecke: bool) -> Dict[str, Any]:
    name = "mult-hecke" if hecke else "mult-schur"
    try:
        if config.lam is not None:
            pairs = [(config.lam, config.mu)]
        else:
            shapes = enumerate_multipartitions(config.n, len(config.charges))
            pairs = list(itertools.product(shapes, repeat=2))
        logger.info(f"{name}: {len(pairs)} pairs for p in {[prime_label(p) for p in config.primes]}")
        jobs = [partial(_mult_job, config, lam, mu, p, hecke) for p in config.primes for lam, mu in pairs]
        return {"table": mult_table(await _fan_out(jobs))}
    except PCanonError as e:
        return _failure(f"computing {name} multiplicities", e)
    except Exception as e:
        return _unexpected(f"computing {name} multiplicities", e)


async def cmd_mult_schur(config: JobConfig) -> Dict[str, Any]:
    """
    Decomposition numbers [Delta(lam) : L(mu)] of the cyclotomic Schur algebra.

    Args:
        config: Needs e, charges and m_vector, plus either lam and mu or n for the whole matrix.

    Returns:
        A dictionary with the table, or an error dictionary.
    """
    return await _cmd_mult(config, hecke=False)


async def cmd_mult_hecke(config: JobConfig) -> Dict[str, Any]:
    """Same as ``cmd_mult_schur`` for the Hecke algebra; killed columns get an empty value."""
    return await _cmd_mult(config, hecke=True)


# ============= CRYSTALS AND WEIGHTS =============

def _show(lam: Optional[Multipartition]) -> Optional[str]:
    return None if lam is None else str(lam)


async def cmd_crystal(config: JobConfig) -> Dict[str, Any]:
    """
    Signatures and the four crystal operators on one multipartition, for every residue.

    Args:
        config: Needs lam, e and charges; order picks the box order and word an optional reflection word.

    Returns:
        A dictionary with the table, or an error dictionary.
    """
    try:
        charge = Multicharge(tuple(config.charges), config.e)
        charge.check(config.lam)
        lam, order = config.lam, config.order
        table = Table(["residue", "signature", "reduced", "f", "e", "f*", "e*", "sigma"])
        for i in range(config.e):
            sig = signature(lam, i, charge, order)
            ops = {op.value: _show(crystal(op, lam, i, charge, order))
                   for op in (CrystalOp.F, CrystalOp.E, CrystalOp.F_DUAL, CrystalOp.E_DUAL)}
            reflected = _show(sigma(i, lam, charge, order)) if ops["e"] is None else None
            record = {"residue": i, "signature": sig.raw, "reduced": sig.reduced, **ops, "sigma": reflected}
            table.records.append(record)
            table.rows.append([record[c] for c in table.columns])
        if config.word:
            image = str(apply_word(config.word, lam, charge, order))
            label = "w=" + ",".join(map(str, config.word))
            table.records.append({"word": list(config.word), "sigma": image})
            table.rows.append([label, None, None, None, None, None, None, image])
        logger.info(f"crystal: {lam} at {charge} ({order.value})")
        return {"table": table}
    except PCanonError as e:
        return _failure("computing crystal data", e)
    except Exception as e:
        return _unexpected("computing crystal data", e)


async def cmd_weights(config: JobConfig) -> Dict[str, Any]:
    """
    Replays a Littelmann chain: the maximal F-string of one color, or F applied along a word.

    Args:
        config: Needs weight and e; color selects the string, word a chain of colors applied left to right.

    Returns:
        A dictionary with the table, or an error dictionary.
    """
    try:
        start = make_weight(config.weight, config.e, config.kind)
        table = Table(["step", "color", "weight", "stabilizer", "dot"])
        if config.word:
            chain, colors = [start], list(config.word)
            for j in colors:
                nxt = littelmann_F(chain[-1], j)
                if not nxt:
                    raise InvalidInputError(f"F_{j} kills {chain[-1]}")
                chain.append(nxt)
        else:
            string = f_string(start, config.color)
            chain, colors = list(string.weights), [config.color] * (len(string.weights) - 1)
        for step, weight in enumerate(chain):
            color = colors[step] if step < len(colors) else None
            dot = str(dot_poly(weight, color)) if color is not None else None
            record = {"step": step, "color": color, "weight": str(weight), "stabilizer": str(stabilizer(weight)),
                      "dot": dot}
            table.records.append(record)
            table.rows.append([record[c] for c in table.columns])
        logger.info(f"weights: chain of {len(chain)} weights from {start}")
        return {"table": table}
    except PCanonError as e:
        return _failure("replaying weight chain", e)
    except Exception as e:
        return _unexpected("replaying weight chain", e)


# ============= VERIFY =============

S3 = CoxeterSystem(Kind.FINITE, 3)
A1 = CoxeterSystem(Kind.AFFINE, 2)

SuiteResult = Tuple[int, List[str]]


def _words(system: CoxeterSystem, max_length: int):
    for length in range(max_length + 1):
        yield from itertools.product(system.generators, repeat=length)


def check_hom_formula() -> SuiteResult:
    checked, failures = 0, []
    for system in (S3, A1):
        words = list(_words(system, 2))
        for u, w in itertools.product(words, repeat=2):
            checked += 1
            expected = standard_pairing(bs_character(system, u), bs_character(system, w))
            if double_leaves_count(system, u, w) != expected:
                failures.append(f"{system} u={u} w={w}")
    return checked, failures


def check_kl_oracle() -> SuiteResult:
    checked, failures = 0, []
    for w in enumerate_up_to_length(S3, 3):
        checked += 1
        if p_canonical(S3, w, None).expansion != kl_basis(w):
            failures.append(f"{w}")
    return checked, failures


def check_dot_families() -> SuiteResult:
    checked, failures = 0, []
    for kind, n, e in ((Kind.FINITE, 2, 2), (Kind.FINITE, 3, 3), (Kind.AFFINE, 2, 2), (Kind.AFFINE, 2, 3)):
        report = verify_dot_properties(standard_family(n, e, kind))
        checked += sum(report.checked.values())
        failures += [f"{kind.value} n={n} e={e}: {f}" for f in report.failures]
    return checked, failures


def check_bubbles() -> SuiteResult:
    checked, failures = 0, []
    for a, b in ((0, 1), (1, 0), (1, 1), (2, 1), (1, 2)):
        for m in range(4):
            checked += 1
            if bubble(m, a, b, "pi") != bubble_by_trace(m, a, b, "pi"):
                failures.append(f"pi_{m} a={a} b={b}")
        checked += 1
        bad = grassmannian_check(a, b, window=3)
        if bad:
            failures.append(f"grassmannian a={a} b={b} degrees {bad}")
    return checked, failures


def check_wedge_intertwiner() -> SuiteResult:
    checked, failures = 0, []
    for heights, e in (((5,), 2), ((5,), 3), ((5, 6), 2)):
        charge = heights_charge(heights, e)
        for n in range(3):
            for lam in enumerate_multipartitions(n, len(heights)):
                vec = fock_to_wedge(lam, heights)
                for i in range(e):
                    checked += 1
                    up = Counter(fock_to_wedge(mu, heights) for mu in fock_apply(FockOp.F, lam, i, charge))
                    down = Counter(fock_to_wedge(mu, heights) for mu in fock_apply(FockOp.E, lam, i, charge))
                    if wedge_apply(FockOp.F, vec, i, e) != up or \
                            wedge_apply(FockOp.E, vec, i, e, truncated=True) != down:
                        failures.append(f"{lam} residue {i} heights {heights} e={e}")
    return checked, failures


def check_coset_intervals() -> SuiteResult:
    checked, failures = 0, []
    for system, max_length in ((S3, 3), (A1, 4)):
        elements = list(enumerate_up_to_length(system, max_length))
        for size in range(len(system.generators)):
            for I in itertools.combinations(system.generators, size):
                for w in elements:
                    coset = coset_minimal(w, I, Side.LEFT)
                    members = coset_members(coset)
                    if members[-1].length > max_length:
                        continue
                    checked += 1
                    interval = [z for z in elements
                                if bruhat_leq(coset.representative, z) and bruhat_leq(z, members[-1])]
                    if sorted(interval) != members:
                        failures.append(f"{system} W_{set(I)} {w}")
    return checked, failures


SUITES: Dict[str, Callable[[], SuiteResult]] = {
    "hom-formula": check_hom_formula,
    "kl-oracle": check_kl_oracle,
    "dot-families": check_dot_families,
    "bubbles": check_bubbles,
    "wedge-intertwiner": check_wedge_intertwiner,
    "coset-intervals": check_coset_intervals,
}


async def cmd_verify(config: JobConfig) -> Dict[str, Any]:
    """
    Runs the desk-scale invariant suites and the cache check.

    Args:
        config: Only cache_dir and use_cache are read.

    Returns:
        A dictionary with the report table; it also carries an error when any suite failed.
    """
    try:
        names = list(SUITES)
        outcomes = await _fan_out([SUITES[name] for name in names])
        if config.use_cache:
            checked, bad = CacheStore(config.cache_dir).verify()
            names.append("cache")
            outcomes.append((checked, [f"corrupt record {name}" for name in bad]))
        table = Table(["suite", "checked", "passed", "witness"])
        failed = []
        for name, (checked, failures) in zip(names, outcomes):
            witness = failures[0] if failures else None
            table.records.append({"suite": name, "checked": checked, "passed": not failures, "witness": witness})
            table.rows.append([name, checked, not failures, witness])
            if failures:
                logger.warning(f"verify: {name} failed {len(failures)} checks, first at {witness}")
                failed.append(name)
        if failed:
            return {"table": table, "error": "Verification failed", "details": failed,
                    "exit_code": CacheCorruptionError.exit_code if failed == ["cache"] else ConsistencyError.exit_code}
        logger.info(f"verify: all {len(names)} suites passed")
        return {"table": table}
    except PCanonError as e:
        return _failure("running verification suites", e)
    except Exception as e:
        return _unexpected("running verification suites", e)
