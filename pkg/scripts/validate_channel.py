#!/usr/bin/env python3
"""Empirical vs closed-form BER for BPSK over the Rayleigh channel.

Transmits blocks of known bits at each SNR and compares the measured bit
error rate against 0.5*(1 - sqrt(snr/(1+snr))), reporting the deviation
in binomial standard errors.
"""

import argparse
import math
import sys

import numpy as np

from semcom import phy


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bits", type=int, default=1_000_000,
                        help="bits per SNR point")
    parser.add_argument("--snr-db", default="0,5,10,15,20",
                        help="comma-separated SNR list in dB")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    print("snr_db  empirical   analytic    deviation")
    worst = 0.0
    for snr_db in (float(v) for v in args.snr_db.split(",")):
        bits = rng.integers(0, 2, size=args.bits).astype(np.uint8)
        out = phy.transmit_packet(bits, phy.ChannelParams(snr_db, rng))
        ber = float((out != bits).mean())
        expected = phy.analytic_ber(snr_db)
        se = math.sqrt(expected * (1.0 - expected) / args.bits)
        dev = abs(ber - expected) / se
        worst = max(worst, dev)
        print(f"{snr_db:6g}  {ber:.6f}   {expected:.6f}   {dev:5.2f} se")
    print(f"worst deviation: {worst:.2f} standard errors")
    return 0 if worst <= 3.0 else 1


if __name__ == "__main__":
    sys.exit(main())
