"""Command-line front end binding corpora, sampling, degradation, metrics, and benchmarks.

All numeric output is machine-readable JSON on stdout; humans get a short
summary on stderr. Exit codes: 0 success, 2 config error, 3 data error,
4 starvation (insufficient pairs), so training-loop callers can distinguish
an exhausted sampler from bad input.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .corpus import Corpus
from .degrade import build_synthetic_corpus, extract_noise_patches
from .errors import (
    ConfigError,
    EmptyCorpusWindowsError,
    FilenameMismatchError,
    InsufficientPairsError,
    TooSmallError,
    VarmatchError,
)
from .image import Image, load_png
from .metrics import psnr, ssim
from .sampler import (
    SamplerConfig,
    _admissible_mask,
    export_manifest,
    extract_candidates,
    match_pairs,
    sample_batch,
)
from .stats import patch_stats

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_STARVED = 4

# Variance histogram bin edges: [0,1), [1,2), [2,4), ... doubling up to
# 16384, which exceeds the 127.5^2 maximum possible 8-bit patch variance.
VARIANCE_BIN_EDGES = [0.0, 1.0] + [float(2**k) for k in range(1, 15)]

_QUANTILES = (0.25, 0.5, 0.75, 0.9, 0.99)


@dataclass
class RunConfig:
    """Sampler knobs plus corpus paths, output paths, and metric flags."""

    lr_dir: str = ""
    hr_dir: str = ""
    out_dir: str = ""
    sigma_t_sq: float = 64.0
    mu_t: float | None = None
    lr_patch: int = 32
    hr_patch: int = 128
    scale: int = 4
    n_lr: int = 30
    n_hr: int = 30
    batch_size: int = 16
    max_retries: int = 8
    seed: int = 0
    num_batches: int = 1
    crop_border: int = 0

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            raw = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must contain a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}")
        return cls(**data)

    def apply_overrides(self, args: argparse.Namespace) -> None:
        for field in dataclasses.fields(self):
            value = getattr(args, field.name, None)
            if value is not None:
                setattr(self, field.name, value)

    def sampler_config(self) -> SamplerConfig:
        return SamplerConfig(
            sigma_t_sq=self.sigma_t_sq,
            mu_t=self.mu_t,
            lr_patch=self.lr_patch,
            hr_patch=self.hr_patch,
            scale=self.scale,
            n_lr=self.n_lr,
            n_hr=self.n_hr,
            batch_size=self.batch_size,
            max_retries=self.max_retries,
            seed=self.seed,
        )

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def _note(msg: str) -> None:
    sys.stderr.write(msg + "\n")


def _quantile_summary(values: np.ndarray) -> dict:
    out = {
        "count": int(values.size),
        "min": float(values.min()),
        "max": float(values.max()),
        "mean": float(values.mean()),
    }
    for q in _QUANTILES:
        out[f"p{int(q * 100)}"] = float(np.quantile(values, q))
    return out


def cmd_stats(args: argparse.Namespace) -> int:
    corpus = Corpus.from_dir(args.corpus_dir)
    patch, stride = args.patch, args.stride
    if patch < 1 or stride < 1:
        raise ConfigError(f"patch and stride must be >= 1, got {patch}/{stride}")
    variances = []
    means = []
    per_image = []
    for image_id in corpus.ids:
        lum = corpus.luminance(image_id)
        # A stride or patch exceeding the image side yields no scan grid.
        if patch > min(lum.width, lum.height) or stride > min(lum.width, lum.height):
            per_image.append({"image": image_id, "windows": 0})
            continue
        table = corpus.table(image_id)
        count = 0
        for y in range(0, lum.height - patch + 1, stride):
            for x in range(0, lum.width - patch + 1, stride):
                st = patch_stats(table, x, y, patch, patch)
                variances.append(st.variance)
                means.append(st.mean)
                count += 1
        per_image.append({"image": image_id, "windows": count})
    if not variances:
        raise EmptyCorpusWindowsError(
            f"patch {patch} / stride {stride} yields no windows over {len(corpus)} image(s)"
        )
    var_arr = np.array(variances)
    mean_arr = np.array(means)
    counts, _ = np.histogram(var_arr, bins=VARIANCE_BIN_EDGES)
    doc = {
        "config": {"corpus_dir": str(args.corpus_dir), "patch": patch, "stride": stride},
        "images": per_image,
        "variance_histogram": {"edges": VARIANCE_BIN_EDGES, "counts": counts.tolist()},
        "variance": _quantile_summary(var_arr),
        "mean": _quantile_summary(mean_arr),
    }
    _emit(doc, args.out)
    _note(f"{var_arr.size} windows over {len(corpus)} image(s); "
          f"median variance {np.median(var_arr):.2f}")
    return EXIT_OK


def _resolve_run_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    config.apply_overrides(args)
    return config


def _run_sweep(config: RunConfig, thresholds: list[float], rounds: int, out_dir: Path | None) -> dict:
    lr_corpus = Corpus.from_dir(config.lr_dir)
    hr_corpus = Corpus.from_dir(config.hr_dir)
    base = config.sampler_config()
    rng = np.random.Generator(np.random.PCG64(base.seed))
    per_threshold = {t: {"admissible": 0, "matched": 0} for t in thresholds}
    evaluated = 0
    for _ in range(rounds):
        lr_id = lr_corpus.ids[int(rng.integers(0, len(lr_corpus)))]
        hr_id = hr_corpus.ids[int(rng.integers(0, len(hr_corpus)))]
        lr_cands = extract_candidates(
            lr_corpus.luminance(lr_id), lr_corpus.table(lr_id),
            base.n_lr, base.lr_patch, rng, image_id=lr_id,
        )
        hr_cands = extract_candidates(
            hr_corpus.luminance(hr_id), hr_corpus.table(hr_id),
            base.n_hr, base.hr_patch, rng, image_id=hr_id,
        )
        evaluated += base.n_lr * base.n_hr
        for t in thresholds:
            _, mask = _admissible_mask(lr_cands, hr_cands, t, base.mu_t)
            per_threshold[t]["admissible"] += int(mask.sum())
            per_threshold[t]["matched"] += len(match_pairs(lr_cands, hr_cands, t, base.mu_t))
    results = []
    for t in thresholds:
        stats = per_threshold[t]
        results.append({
            "sigma_t_sq": t,
            "evaluated_pairs": evaluated,
            "admissible_pairs": stats["admissible"],
            "admissible_fraction": stats["admissible"] / evaluated if evaluated else 0.0,
            "matched_pairs": stats["matched"],
        })
    doc = {"config": config.as_dict(), "sweep_rounds": rounds, "thresholds": results}
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "sweep.json").write_text(
            json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return doc


def cmd_sample(args: argparse.Namespace) -> int:
    config = _resolve_run_config(args)
    if not config.lr_dir or not config.hr_dir:
        raise ConfigError("sample requires lr_dir and hr_dir (config file or flags)")

    if args.sigma_sweep:
        try:
            thresholds = [float(t) for t in args.sigma_sweep.split(",") if t.strip()]
        except ValueError as exc:
            raise ConfigError(f"malformed --sigma-sweep list: {args.sigma_sweep!r}") from exc
        if not thresholds:
            raise ConfigError("--sigma-sweep needs at least one threshold")
        out_dir = Path(config.out_dir) if config.out_dir else None
        doc = _run_sweep(config, thresholds, args.sweep_rounds, out_dir)
        _emit(doc, None)
        fractions = ", ".join(f"{r['sigma_t_sq']:g}: {r['admissible_fraction']:.4f}"
                              for r in doc["thresholds"])
        _note(f"admissible fraction by threshold -> {fractions}")
        return EXIT_OK

    if not config.out_dir:
        raise ConfigError("sample requires out_dir (config file or --out-dir)")
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lr_corpus = Corpus.from_dir(config.lr_dir)
    hr_corpus = Corpus.from_dir(config.hr_dir)
    sampler_config = config.sampler_config()
    rng = np.random.Generator(np.random.PCG64(sampler_config.seed))
    batches = []
    evaluated = 0
    admissible = 0
    for index in range(config.num_batches):
        batch = sample_batch(lr_corpus, hr_corpus, sampler_config, rng)
        manifest_path = out_dir / f"manifest_{index:05d}.jsonl"
        export_manifest(batch, manifest_path)
        evaluated += batch.evaluated_pairs
        admissible += batch.admissible_pairs
        batches.append({
            "manifest": manifest_path.name,
            "pairs": len(batch.pairs),
            "retries_used": batch.retries_used,
            "evaluated_pairs": batch.evaluated_pairs,
            "admissible_pairs": batch.admissible_pairs,
        })
    doc = {
        "config": config.as_dict(),
        "batches": batches,
        "totals": {
            "num_batches": len(batches),
            "pairs": sum(b["pairs"] for b in batches),
            "evaluated_pairs": evaluated,
            "admissible_pairs": admissible,
            "admissible_fraction": admissible / evaluated if evaluated else 0.0,
            "retries_used": sum(b["retries_used"] for b in batches),
        },
    }
    (out_dir / "config.json").write_text(
        json.dumps(config.as_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    (out_dir / "summary.json").write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _emit(doc, None)
    _note(f"wrote {len(batches)} manifest(s) to {out_dir}; "
          f"admissible fraction {doc['totals']['admissible_fraction']:.4f}")
    return EXIT_OK


def cmd_degrade(args: argparse.Namespace) -> int:
    noise_corpus = Corpus.from_dir(args.lr_noise_source_dir)
    bank = extract_noise_patches(
        noise_corpus, args.threshold, patch=args.noise_patch, stride=args.noise_stride
    )
    summary = build_synthetic_corpus(args.hr_dir, args.out_dir, bank, args.scale, args.seed)
    doc = {
        "config": {
            "hr_dir": str(args.hr_dir),
            "lr_noise_source_dir": str(args.lr_noise_source_dir),
            "out_dir": str(args.out_dir),
            "threshold": args.threshold,
            "scale": args.scale,
            "seed": args.seed,
            "noise_patch": args.noise_patch,
            "noise_stride": args.noise_stride,
        },
        "summary": summary,
    }
    _emit(doc, None)
    _note(f"degraded {summary['count']} image(s) with a {summary['bank']['tiles']}-tile bank")
    return EXIT_OK


def _crop_border(image: Image, border: int) -> Image:
    if border == 0:
        return image
    if 2 * border >= min(image.width, image.height):
        raise TooSmallError(f"crop {border} leaves no pixels on {image.width}x{image.height}")
    return Image(image.planes[:, border:-border, border:-border].copy())


def cmd_metrics(args: argparse.Namespace) -> int:
    if args.crop < 0:
        raise ConfigError(f"--crop must be >= 0, got {args.crop}")
    pred_dir, ref_dir = Path(args.pred_dir), Path(args.ref_dir)
    pred_names = {p.name for p in pred_dir.glob("*.png")}
    ref_names = {p.name for p in ref_dir.glob("*.png")}
    if pred_names != ref_names:
        missing_in_pred = sorted(ref_names - pred_names)
        missing_in_ref = sorted(pred_names - ref_names)
        raise FilenameMismatchError(
            f"directories disagree: missing in pred {missing_in_pred}, missing in ref {missing_in_ref}",
            missing_in_pred=missing_in_pred,
            missing_in_ref=missing_in_ref,
        )
    records = []
    psnr_values = []
    ssim_values = []
    infinite = 0
    errors = 0
    for name in sorted(pred_names):
        try:
            pred = _crop_border(load_png(pred_dir / name), args.crop)
            ref = _crop_border(load_png(ref_dir / name), args.crop)
            p = psnr(pred, ref)
            s = ssim(pred, ref)
        except VarmatchError as exc:
            records.append({"image": name, "error": exc.code, "message": str(exc)})
            errors += 1
            continue
        rec = {"image": name, "ssim": s}
        ssim_values.append(s)
        if p == float("inf"):
            rec["psnr_db"] = None
            rec["psnr_infinite"] = True
            infinite += 1
        else:
            rec["psnr_db"] = p
            rec["psnr_infinite"] = False
            psnr_values.append(p)
        records.append(rec)
    doc = {
        "config": {"pred_dir": str(pred_dir), "ref_dir": str(ref_dir), "crop": args.crop},
        "images": records,
        "summary": {
            "count": len(records),
            "errors": errors,
            "psnr_infinite_count": infinite,
            "mean_psnr_db": float(np.mean(psnr_values)) if psnr_values else None,
            "mean_ssim": float(np.mean(ssim_values)) if ssim_values else None,
        },
    }
    _emit(doc, args.out)
    for rec in records:
        if "error" in rec:
            _note(f"{rec['image']}: ERROR {rec['error']}")
        else:
            p = "inf" if rec["psnr_infinite"] else f"{rec['psnr_db']:.3f}"
            _note(f"{rec['image']}: psnr {p} dB, ssim {rec['ssim']:.5f}")
    summary = doc["summary"]
    mean_p = "n/a" if summary["mean_psnr_db"] is None else f"{summary['mean_psnr_db']:.3f}"
    mean_s = "n/a" if summary["mean_ssim"] is None else f"{summary['mean_ssim']:.5f}"
    _note(f"mean psnr {mean_p} dB ({summary['psnr_infinite_count']} infinite excluded), "
          f"mean ssim {mean_s}")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    corpus = Corpus.from_dir(args.corpus_dir)
    doc = {
        "config": {
            "corpus_dir": str(args.corpus_dir),
            "patch": args.patch,
            "iters": args.iters,
            "warmup": args.warmup,
            "seed": args.seed,
            "sample_batches": args.sample_batches,
        },
        "table_build": bench_mod.bench_table_build(corpus),
        "patch_stats": bench_mod.bench_patch_stats(
            corpus, args.patch, args.iters, args.warmup, args.seed
        ),
    }
    if args.lr_dir and args.hr_dir:
        lr_corpus = Corpus.from_dir(args.lr_dir)
        hr_corpus = Corpus.from_dir(args.hr_dir)
        config = SamplerConfig(seed=args.seed)
        doc["sampling"] = bench_mod.bench_sampling(
            lr_corpus, hr_corpus, config, args.sample_batches, min(args.warmup, 2)
        )
    _emit(doc, None)
    speedup = doc["patch_stats"]["speedup"]
    _note(f"integral-table speedup over naive: {speedup:.1f}x for {args.patch}^2 patches")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varmatch",
        description="Variance-matched LR/HR patch sampling, degradation, and metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="patch variance/mean histogram over a corpus")
    p.add_argument("corpus_dir")
    p.add_argument("--patch", type=int, default=32)
    p.add_argument("--stride", type=int, default=32)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("sample", help="sample variance-matched pair batches to manifests")
    p.add_argument("--config", default=None, help="JSON config file; flags override")
    p.add_argument("--lr-dir", dest="lr_dir", default=None)
    p.add_argument("--hr-dir", dest="hr_dir", default=None)
    p.add_argument("--out-dir", dest="out_dir", default=None)
    p.add_argument("--sigma-t-sq", dest="sigma_t_sq", type=float, default=None)
    p.add_argument("--mu-t", dest="mu_t", type=float, default=None)
    p.add_argument("--lr-patch", dest="lr_patch", type=int, default=None)
    p.add_argument("--hr-patch", dest="hr_patch", type=int, default=None)
    p.add_argument("--scale", type=int, default=None)
    p.add_argument("--n-lr", dest="n_lr", type=int, default=None)
    p.add_argument("--n-hr", dest="n_hr", type=int, default=None)
    p.add_argument("--batch-size", dest="batch_size", type=int, default=None)
    p.add_argument("--max-retries", dest="max_retries", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--num-batches", dest="num_batches", type=int, default=None)
    p.add_argument("--sigma-sweep", dest="sigma_sweep", default=None,
                   help="comma-separated thresholds; measure admissible fraction per threshold "
                        "over a shared candidate stream instead of writing manifests")
    p.add_argument("--sweep-rounds", dest="sweep_rounds", type=int, default=50)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("degrade", help="build a synthetic LR corpus from HR images plus real noise")
    p.add_argument("hr_dir")
    p.add_argument("lr_noise_source_dir")
    p.add_argument("out_dir")
    p.add_argument("--threshold", type=float, default=64.0)
    p.add_argument("--scale", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-patch", dest="noise_patch", type=int, default=32)
    p.add_argument("--noise-stride", dest="noise_stride", type=int, default=32)
    p.set_defaults(func=cmd_degrade)

    p = sub.add_parser("metrics", help="per-image and mean PSNR/SSIM between two directories")
    p.add_argument("pred_dir")
    p.add_argument("ref_dir")
    p.add_argument("--crop", type=int, default=0, help="shave N border pixels before scoring")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("bench", help="throughput of naive vs integral patch stats, batch rate")
    p.add_argument("corpus_dir")
    p.add_argument("--patch", type=int, default=128)
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--warmup", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lr-dir", dest="lr_dir", default=None)
    p.add_argument("--hr-dir", dest="hr_dir", default=None)
    p.add_argument("--sample-batches", dest="sample_batches", type=int, default=20)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        _fail(exc)
        return EXIT_CONFIG
    except InsufficientPairsError as exc:
        _fail(exc, extra={"achieved": exc.achieved})
        return EXIT_STARVED
    except VarmatchError as exc:
        _fail(exc)
        return EXIT_DATA


def _fail(exc: VarmatchError, extra: dict | None = None) -> None:
    doc = {"error": exc.code, "message": str(exc)}
    if extra:
        doc.update(extra)
    sys.stderr.write(json.dumps(doc, sort_keys=True) + "\n")


def entrypoint() -> None:
    sys.exit(main())
