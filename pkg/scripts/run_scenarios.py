"""Replay the scripted race catalog and print each outcome."""

from concgraph.verify import catalog, false_positive_race, run_scenario


def main():
    failed = 0
    for sc in catalog() + [false_positive_race()]:
        o = run_scenario(sc)
        failed += not o.passed
        print(f"{'PASS' if o.passed else 'FAIL'}  {sc.name}")
        print(f"      {o.verdict}")
        if o.verdict.relaxed_needed:
            print("      (linearizable only with false-positive aborts)")
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
