#!/usr/bin/env python
# -*- coding:utf-8 -*-
def main():
    from folda.core.di import get_settings
    from folda.core.log import configure_logging, get_logger
    from folda.domain.alignment import summarize
    from folda.domain.nets import PetriNet, Trace
    from folda.domain.pipeline import align_trace
    from folda.domain.schemas import Variant

    s = get_settings()
    configure_logging(s, force=True)
    logger = get_logger("demo")

    model = PetriNet.build(
        ["i", "p1", "p2", "p3", "p4", "o"],
        {"t1": "S", "t2": "A", "t3": "B", "t4": "C"},
        [("i", "t1"), ("t1", "p1"), ("t1", "p2"), ("p1", "t2"), ("t2", "p3"),
         ("p2", "t3"), ("t3", "p4"), ("p3", "t4"), ("p4", "t4"), ("t4", "o")],
        ["i"], ["o"], name="demo",
    )
    trace = Trace.sequential(["S", "B", "A", "C"])
    run = align_trace(model, trace, Variant.FOLDA_H)
    logger.info("aligned", extra={"cost": str(run.metrics.cost), "queued": run.metrics.queued_states})
    print(run.alignment.cost, summarize(run.alignment))

if __name__ == "__main__":
    main()
