"""Command-line driver: key management, bulk encrypt/decrypt, the
encrypt -> sort -> decrypt -> verify pipeline, timing benchmarks, and the
ciphertext-only analysis report.

Exit codes are fixed for shell-level integration: 0 ok, 2 bad parameters,
3 bad data (domain/foreign values), 4 order violation.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from fractions import Fraction

from . import analysis, bench, gacd, opf
from .prng import DeterministicGenerator, Seed, derive_seed, fresh_seed, seed_from_material

EXIT_OK = 0
EXIT_PARAMS = 2
EXIT_DATA = 3
EXIT_ORDER = 4

SEED_ENV = "OPE_SEED_HEX"


def _resolve_seed(arg_seed):
    hexstr = arg_seed or os.environ.get(SEED_ENV)
    if hexstr:
        return seed_from_material(bytes.fromhex(hexstr))
    return fresh_seed()


def _load_any_key(path):
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().strip()
    if first == f"scheme={gacd.KEY_FILE_SCHEME}":
        return "gacd", gacd.load_key(path)
    if first == f"scheme={opf.KEY_FILE_SCHEME}":
        key = opf.load_key(path)
        return f"opf-{key.sampler.value}", key
    print(f"error: unrecognised key file {path!r}", file=sys.stderr)
    raise SystemExit(EXIT_PARAMS)


def _read_ints(path):
    with open(path, encoding="utf-8") as fh:
        return [int(line) for line in fh if line.strip()]


def _write_ints(path, values):
    with open(path, "w", encoding="utf-8") as fh:
        for v in values:
            fh.write(f"{v}\n")


def cmd_keygen(args) -> int:
    if args.M is not None:
        M = args.M
    elif args.rho is not None:
        M = 1 << args.rho
    else:
        print("error: need --M or --rho", file=sys.stderr)
        return EXIT_PARAMS
    seed = _resolve_seed(args.seed)

    if args.scheme == "gacd":
        lam = args.lam if args.lam is not None else gacd.min_lambda(M)
        params = gacd.SchemeParams(M=M, lam=lam, n_hint=args.n_hint)
        report = gacd.validate_params(params)
        for w in report.warnings:
            print(f"warning: {w}", file=sys.stderr)
        if not report.ok:
            for reason in report.reasons:
                print(f"error: {reason}", file=sys.stderr)
            return EXIT_PARAMS
        key = gacd.keygen(params, DeterministicGenerator(seed))
        gacd.save_key(key, args.out)
    else:
        if M & (M - 1):
            print(f"error: scheme {args.scheme} needs a power-of-two M", file=sys.stderr)
            return EXIT_PARAMS
        sampler = opf.Sampler.BETA if args.scheme == "opf-beta" else opf.Sampler.UNIFORM
        key = opf.make_opf_key(
            r_bits=M.bit_length() - 1, sampler=sampler, N=args.N, master_seed=seed
        )
        opf.save_key(key, args.out)
    return EXIT_OK


def _domain_bound(kind, key):
    return key.params.M if kind == "gacd" else key.M


def cmd_encrypt(args) -> int:
    kind, key = _load_any_key(args.key)
    gen = DeterministicGenerator(_resolve_seed(args.seed))

    if args.random is not None:
        bound = _domain_bound(kind, key)
        pgen = DeterministicGenerator(derive_seed(_resolve_seed(args.seed), b"plain"))
        plaintexts = [pgen.uniform_int(0, bound - 1) for _ in range(args.random)]
        _write_ints(args.out + ".plain", plaintexts)
    else:
        plaintexts = _read_ints(args.infile)

    cts = []
    for lineno, m in enumerate(plaintexts, start=1):
        try:
            if kind == "gacd":
                cts.append(gacd.encrypt(m, key, gen))
            else:
                cts.append(opf.opf_encrypt(m, key))
        except (gacd.DomainError, opf.DomainError) as exc:
            print(f"error: line {lineno}: {exc}", file=sys.stderr)
            return EXIT_DATA
    _write_ints(args.out, cts)
    return EXIT_OK


def _decrypt_one(kind, key, c):
    if kind == "gacd":
        return gacd.decrypt(c, key)
    return opf.opf_decrypt(c, key)


def cmd_decrypt(args) -> int:
    kind, key = _load_any_key(args.key)
    out = []
    for lineno, c in enumerate(_read_ints(args.infile), start=1):
        try:
            out.append(_decrypt_one(kind, key, c))
        except (gacd.ForeignCiphertextError, opf.NotACiphertextError, opf.DomainError) as exc:
            print(f"error: line {lineno}: {exc}", file=sys.stderr)
            return EXIT_DATA
    _write_ints(args.out, out)
    return EXIT_OK


def cmd_sort_verify(args) -> int:
    kind, key = _load_any_key(args.key)
    cts = _read_ints(args.infile)

    if args.plain:
        sidecar = _read_ints(args.plain)
        if len(sidecar) != len(cts):
            print("error: sidecar length mismatch", file=sys.stderr)
            return EXIT_ORDER
        for i, (c, m_expected) in enumerate(zip(cts, sidecar)):
            try:
                m = _decrypt_one(kind, key, c)
            except (gacd.ForeignCiphertextError, opf.NotACiphertextError, opf.DomainError) as exc:
                print(f"error: line {i + 1}: {exc}", file=sys.stderr)
                return EXIT_DATA
            if m != m_expected:
                print(f"error: plaintext cross-check failed at index {i}", file=sys.stderr)
                return EXIT_ORDER

    t0 = time.perf_counter()
    cts.sort()
    sort_ms = (time.perf_counter() - t0) * 1e3

    prev = None
    for i, c in enumerate(cts):
        try:
            m = _decrypt_one(kind, key, c)
        except (gacd.ForeignCiphertextError, opf.NotACiphertextError, opf.DomainError) as exc:
            print(f"error: sorted index {i}: {exc}", file=sys.stderr)
            return EXIT_DATA
        if prev is not None and m < prev:
            print(f"error: order violation at sorted index {i}", file=sys.stderr)
            return EXIT_ORDER
        prev = m
    print(f"ok: {len(cts)} ciphertexts, plaintext order verified, sort {sort_ms:.2f} ms")
    return EXIT_OK


def cmd_bench(args) -> int:
    seed = _resolve_seed(args.seed)
    results = []
    for scheme in args.schemes:
        for rho in args.rho:
            if not bench.supported(scheme, rho):
                print(f"warning: skipping {scheme} at rho={rho} (unsupported)", file=sys.stderr)
                continue
            r = bench.bench_scheme(scheme, rho, count=args.count, repeat=args.repeat, seed=seed)
            results.append(r)
            for line in bench.metric_lines(r):
                print(line)
    print(bench.format_table(results))
    return EXIT_OK


def cmd_analyze(args) -> int:
    cts = _read_ints(args.infile)
    if not cts:
        print("error: empty ciphertext sample", file=sys.stderr)
        return EXIT_DATA
    sample = analysis.SortedSample(tuple(sorted(cts)), args.M)
    n = sample.n
    k_hat = analysis.estimate_k(sample)
    print(f"metric=k_hat value={float(k_hat):.6g} band=0")
    print(
        f"metric=leakage_bits value={analysis.leakage_bits(n):.4f} "
        f"band={analysis.LEAKAGE_BAND_BITS}"
    )
    if args.challenge is not None:
        est = analysis.window_attack(args.challenge, sample)
        m_hat = float(est.m_hat)
        print(f"metric=m_hat value={m_hat:.6g} band=0")
        print(f"metric=radius_fail value={m_hat / (2 * n):.6g} band=0")
        print(f"metric=radius_succeed value={m_hat * math.log(2) / n:.6g} band=0")
    if args.bruteforce:
        k_min, k_max = (int(v) for v in args.bruteforce.split(".."))
        try:
            candidates = analysis.bruteforce_gacd(cts, k_min, k_max)
        except analysis.BudgetExceededError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARAMS
        print(f"metric=bruteforce_candidates value={len(candidates)} band=0")
        for k in candidates:
            print(f"candidate_k={k}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="acdope", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    kg = sub.add_parser("keygen", help="generate a key file")
    kg.add_argument("--scheme", choices=("gacd", "opf-uniform", "opf-beta"), required=True)
    kg.add_argument("--M", type=int)
    kg.add_argument("--rho", type=int, help="plaintext bit length; M = 2^rho")
    kg.add_argument("--lambda", dest="lam", type=int)
    kg.add_argument("--N", type=int, help="range bound for opf schemes (default M^2)")
    kg.add_argument("--n-hint", type=int)
    kg.add_argument("--seed", help="hex seed (default: system entropy)")
    kg.add_argument("--out", required=True)
    kg.set_defaults(func=cmd_keygen)

    enc = sub.add_parser("encrypt", help="bulk encrypt newline-separated decimals")
    enc.add_argument("--key", required=True)
    enc.add_argument("--in", dest="infile")
    enc.add_argument("--random", type=int, help="generate this many random plaintexts")
    enc.add_argument("--seed")
    enc.add_argument("--out", required=True)
    enc.set_defaults(func=cmd_encrypt)

    dec = sub.add_parser("decrypt", help="bulk decrypt")
    dec.add_argument("--key", required=True)
    dec.add_argument("--in", dest="infile", required=True)
    dec.add_argument("--out", required=True)
    dec.set_defaults(func=cmd_decrypt)

    sv = sub.add_parser("sort-verify", help="sort ciphertexts, decrypt, verify order")
    sv.add_argument("--key", required=True)
    sv.add_argument("--in", dest="infile", required=True)
    sv.add_argument("--plain", help="plaintext sidecar for cross-check")
    sv.set_defaults(func=cmd_sort_verify)

    bn = sub.add_parser("bench", help="timing comparison across schemes")
    bn.add_argument("--schemes", nargs="+", default=list(bench.SCHEMES))
    bn.add_argument("--rho", nargs="+", type=int, default=[7, 15, 31, 63, 127])
    bn.add_argument("--count", type=int, default=10_000)
    bn.add_argument("--repeat", type=int, default=5)
    bn.add_argument("--seed")
    bn.set_defaults(func=cmd_bench)

    an = sub.add_parser("analyze", help="ciphertext-only estimators")
    an.add_argument("--in", dest="infile", required=True)
    an.add_argument("--M", type=int, required=True)
    an.add_argument("--challenge", type=int)
    an.add_argument("--bruteforce", help="k_min..k_max candidate range")
    an.set_defaults(func=cmd_analyze)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except gacd.ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except SystemExit as exc:  # _load_any_key
        return int(exc.code)


if __name__ == "__main__":
    sys.exit(main())
