#!/usr/bin/env python3
"""Regenerate the bundled synthetic fixtures under data/.

Everything is seeded, so reruns are byte-identical.  The pfx2as fixture
gives the AS-4538 stand-in exactly two /8 blocks (33,554,432 addresses);
the flow fixture is shaped so that ports below 1000 and above 49000 carry
well over 60% of the bytes; the event fixture spans exactly 600 seconds.
"""

from __future__ import annotations

import random
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

IANA_ROWS = [
    ("000/8", "IANA - Local Identification", "1981-09", "RESERVED"),
    ("001/8", "APNIC", "2010-01", "ALLOCATED"),
    ("002/8", "RIPE NCC", "2009-09", "ALLOCATED"),
    ("003/8", "General Electric Company", "1988-05", "LEGACY"),
    ("010/8", "IANA - Private Use", "1995-06", "RESERVED"),
    ("012/8", "AT&T Bell Laboratories", "1983-06", "LEGACY"),
    ("023/8", "ARIN", "2010-11", "ALLOCATED"),
    ("027/8", "APNIC", "2010-01", "ALLOCATED"),
    ("036/8", "APNIC", "2010-10", "ALLOCATED"),
    ("059/8", "APNIC", "2004-04", "ALLOCATED"),
    ("077/8", "RIPE NCC", "2006-08", "ALLOCATED"),
    ("101/8", "APNIC", "2010-08", "ALLOCATED"),
    ("102/8", "AFRINIC", "2011-02", "ALLOCATED"),
    ("127/8", "IANA - Loopback", "1981-09", "RESERVED"),
    ("150/8", "APNIC", "1993-05", "ALLOCATED"),
    ("177/8", "LACNIC", "2010-06", "ALLOCATED"),
    ("185/8", "RIPE NCC", "2011-02", "ALLOCATED"),
    ("192/8", "ARIN", "1993-05", "ALLOCATED"),
    ("203/8", "APNIC", "1993-05", "ALLOCATED"),
    ("224/8", "Multicast", "1981-09", "RESERVED"),
    ("240/8", "Future Use", "1981-09", "RESERVED"),
    ("100/8", "Unassigned", "", "AVAILABLE"),
]


def write_iana() -> None:
    lines = ["prefix,designation,date,status"]
    lines += [",".join(row) for row in IANA_ROWS]
    (DATA_DIR / "iana.csv").write_text("\n".join(lines) + "\n")


def write_pfx2as() -> None:
    # AS 4538 stand-in: exactly two Class A blocks
    rows = [
        ("59.0.0.0", 8, "4538"),
        ("101.0.0.0", 8, "4538"),
        # covered announcement, must not change the deduped address count
        ("59.64.0.0", 16, "4538"),
        # AS 123 stand-in: two discrete blocks (fragmentation on the IP map)
        ("23.16.0.0", 14, "123"),
        ("150.140.0.0", 15, "123"),
        ("1.0.0.0", 24, "13335"),
        ("1.1.1.0", 24, "13335"),
        ("8.8.8.0", 24, "15169"),
        ("9.9.9.0", 24, "19281,19282"),
        ("77.0.0.0", 10, "3320"),
        ("185.12.0.0", 16, "29208"),
        ("203.0.113.0", 24, "64500"),
    ]
    lines = [f"{base}\t{plen}\t{asn}" for base, plen, asn in rows]
    (DATA_DIR / "pfx2as.txt").write_text("\n".join(lines) + "\n")


def write_flows() -> None:
    rng = random.Random(20260824)
    t0 = 1714000000
    block = "10.0.0"
    heavy_ports = [53, 80, 123, 443, 445, 993, 49152, 51413, 55000, 60123, 64000]
    light_ports = [1024, 3306, 5432, 8080, 25565, 27015, 40000, 48999]
    lines = []
    for _ in range(2500):
        host = rng.randint(1, 254)
        src = f"{block}.{host}"
        # heavy traffic concentrates on system (<1000) and ephemeral (>49000) ports
        if rng.random() < 0.75:
            src_port = rng.choice(heavy_ports)
            nbytes = rng.randint(20_000, 400_000)
        else:
            src_port = rng.choice(light_ports)
            nbytes = rng.randint(200, 15_000)
        dst = f"{rng.randint(11, 223)}.{rng.randint(0, 255)}.{rng.randint(0, 255)}.{rng.randint(1, 254)}"
        dst_port = rng.choice(heavy_ports + light_ports)
        proto = rng.choice(["tcp", "tcp", "tcp", "udp"])
        direction = "down" if rng.random() < 0.65 else "up"
        ts = t0 + rng.randint(0, 3600)
        lines.append(f"{ts},{src},{src_port},{dst},{dst_port},{proto},{nbytes},{direction}")
    lines.sort(key=lambda line: int(line.split(",", 1)[0]))
    (DATA_DIR / "flows.csv").write_text("\n".join(lines) + "\n")


def write_events() -> None:
    rng = random.Random(4538)
    t0 = 1714003600
    duration = 600  # seconds; 60 s frames -> exactly 10 frames
    attackers = [
        f"{rng.randint(11, 223)}.{rng.randint(0, 255)}.{rng.randint(0, 255)}.{rng.randint(1, 254)}"
        for _ in range(40)
    ]
    target = "10.0.0.80"
    lines = [f"{t0},{attackers[0]},{target},ddos", f"{t0 + duration - 1},{attackers[1]},{target},ddos"]
    for _ in range(1198):
        ts = t0 + rng.randint(0, duration - 1)
        lines.append(f"{ts},{rng.choice(attackers)},{target},ddos")
    lines.sort(key=lambda line: int(line.split(",", 1)[0]))
    (DATA_DIR / "events.csv").write_text("\n".join(lines) + "\n")


def write_aslinks() -> None:
    rows = [
        (4538, 3320, "peer"),
        (4538, 13335, "provider_customer"),
        (4538, 123, "provider_customer"),
        (13335, 15169, "peer"),
        (3320, 29208, "provider_customer"),
        (123, 64500, "unknown"),
    ]
    lines = [f"{a},{b},{rel}" for a, b, rel in rows]
    (DATA_DIR / "aslinks.csv").write_text("\n".join(lines) + "\n")


def main() -> None:
    DATA_DIR.mkdir(exist_ok=True)
    write_iana()
    write_pfx2as()
    write_flows()
    write_events()
    write_aslinks()
    for name in ("iana.csv", "pfx2as.txt", "flows.csv", "events.csv", "aslinks.csv"):
        path = DATA_DIR / name
        print(f"wrote {path} ({path.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
