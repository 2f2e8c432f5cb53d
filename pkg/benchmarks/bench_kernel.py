"""Compare the compiled and pure-Python distance kernels.

    python benchmarks/bench_kernel.py [--docs N] [--min-nodes A] [--max-nodes B] [--seed S]

Both kernels fill the upper triangle of the same distance matrix; the script
checks they agree and reports pairs per second.
"""

import argparse
import random
import time

from hmil_ted import CostModel, to_rlt
from hmil_ted._backend import COMPILED_AVAILABLE, CompiledKernel
from hmil_ted._kernel_py import PyKernel
from hmil_ted.forest import Forest
from hmil_ted.generate import record_document


def run(kernel_cls, forest, ids):
    kernel = kernel_cls(forest)
    start = time.perf_counter()
    rows = kernel.fill_rows(ids, list(range(len(ids))))
    return time.perf_counter() - start, rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--docs", type=int, default=150)
    parser.add_argument("--min-nodes", type=int, default=30)
    parser.add_argument("--max-nodes", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    forest = Forest(CostModel.unit())
    ids = [
        forest.add(to_rlt(record_document(rng, rng.randint(args.min_nodes, args.max_nodes))).root)
        for _ in range(args.docs)
    ]
    pairs = args.docs * (args.docs - 1) // 2
    print(f"{args.docs} documents, {pairs} pairs, {len(forest)} distinct subtrees")

    py_time, py_rows = run(PyKernel, forest, ids)
    print(f"python    {py_time:8.3f} s  {pairs / py_time:12.0f} pairs/s")
    if not COMPILED_AVAILABLE:
        print("compiled  not built")
        return
    c_time, c_rows = run(CompiledKernel, forest, ids)
    print(f"compiled  {c_time:8.3f} s  {pairs / c_time:12.0f} pairs/s  ({py_time / c_time:.0f}x)")
    if c_rows != py_rows:
        raise SystemExit("kernels disagree")


if __name__ == "__main__":
    main()
