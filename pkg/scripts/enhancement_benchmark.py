"""Single-speaker enhancement with LTSS thresholds on a speech-like source
plus tonal background. Optionally sweeps the percentile hyperparameter.

    python scripts/enhancement_benchmark.py --percentile 75
    python scripts/enhancement_benchmark.py --sweep 50 60 75 90
"""
import argparse

from priormask.benchmarks import enhancement_benchmark


def run(percentile, args):
    res = enhancement_benchmark(args.clips, args.training, args.seed, percentile,
                                args.input_snr, args.noise_std, args.blur)
    return res.means()


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--clips", type=int, default=10)
    p.add_argument("--training", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--percentile", type=float, default=75.0)
    p.add_argument("--input-snr", type=float, default=0.0)
    p.add_argument("--noise-std", type=float, default=0.5)
    p.add_argument("--blur", type=int, default=3)
    p.add_argument("--sweep", type=float, nargs="+")
    args = p.parse_args()

    print(f"{'X':>6}{'noisy':>10}{'LTSS':>10}{'ideal':>10}   (SNR, dB)")
    for x in args.sweep or [args.percentile]:
        m = run(x, args)
        print(f"{x:>6.1f}{m['noisy']:>10.2f}{m['ltss']:>10.2f}{m['ideal']:>10.2f}")


if __name__ == "__main__":
    main()
