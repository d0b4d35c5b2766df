import io
import random

import pytest
from hypothesis import given, strategies as st

from cybermap import ingest
from cybermap.coords import Cidr, parse_ipv4


def test_parse_iana_basic():
    text = "prefix,designation,date,status\n001/8,APNIC,1983-09,ALLOCATED\n224/8,Multicast,,RESERVED\n"
    records, errors = ingest.parse_iana_csv(io.StringIO(text))
    assert errors == []
    assert records[0].prefix == Cidr.parse("1.0.0.0/8")
    assert records[0].category == "allocated"
    assert records[1].category == "reserved"
    assert records[1].date is None


def test_parse_iana_bad_line_isolated():
    text = "prefix,designation,date,status\n300/8,Bogus,,ALLOCATED\n002/8,RIPE,,ALLOCATED\n"
    records, errors = ingest.parse_iana_csv(io.StringIO(text))
    assert len(records) == 1
    assert records[0].prefix == Cidr.parse("2.0.0.0/8")
    assert len(errors) == 1
    assert errors[0][0] == 2


def test_parse_pfx2as():
    text = "1.0.0.0\t24\t13335\n9.9.9.0\t24\t19281,19282\n1.0.0.0\t33\t1\n"
    records, errors = ingest.parse_pfx2as(io.StringIO(text))
    assert len(records) == 2
    assert records[0] == ingest.PrefixAsRecord(Cidr.parse("1.0.0.0/24"), 13335)
    assert records[1].asn == 19281 and records[1].multi_origin
    assert [e[0] for e in errors] == [3]


def test_parse_pfx2as_underscore_moas():
    records, errors = ingest.parse_pfx2as(io.StringIO("8.8.8.0\t24\t15169_36040\n"))
    assert not errors
    assert records[0].asn == 15169 and records[0].multi_origin


def test_parse_flows():
    text = (
        "1714000000,10.0.0.5,51000,93.184.216.34,443,tcp,12000,down\n"
        "1714000001,10.0.0.6,53,8.8.8.8,53,udp,0,up\n"
        "1714000002,10.0.0.7,1,1.1.1.1,1,tcp,5,sideways\n"
    )
    records, errors = ingest.parse_flows_csv(io.StringIO(text))
    assert len(records) == 2
    assert records[0].direction == "download" and records[0].bytes == 12000
    assert records[1].direction == "upload" and records[1].bytes == 0
    assert [e[0] for e in errors] == [3]


def test_parse_events():
    records, errors = ingest.parse_events_csv(
        io.StringIO("1714000060,198.51.100.7,10.0.0.1,ddos\n")
    )
    assert not errors
    assert records == [
        ingest.EventRecord(1714000060, parse_ipv4("198.51.100.7"), parse_ipv4("10.0.0.1"), "ddos")
    ]
    assert ingest.parse_events_csv(io.StringIO("")) == ([], [])
    _, errors = ingest.parse_events_csv(io.StringIO("1,999.1.1.1,10.0.0.1,ddos\n"))
    assert len(errors) == 1


def test_parse_aslinks():
    records, errors = ingest.parse_aslinks_csv(io.StringIO("4538,4134,peer\n7,7,peer\n1,2\n"))
    assert records[0] == ingest.AsLink(4538, 4134, "peer")
    assert records[1] == ingest.AsLink(1, 2, "unknown")
    assert len(errors) == 1


def test_crlf_accepted():
    records, errors = ingest.parse_events_csv(io.StringIO("5,1.2.3.4,5.6.7.8,scan\r\n"))
    assert not errors and records[0].kind == "scan"


def test_parser_totality_accounts_all_lines():
    lines = ["garbage", "1,2", "", "1714000060,198.51.100.7,10.0.0.1,ddos", "\x00\xff junk"]
    records, errors = ingest.parse_events_csv(io.StringIO("\n".join(lines) + "\n"))
    non_blank = sum(1 for line in lines if line.strip())
    assert len(records) + len(errors) == non_blank


def test_store_lpm_basics():
    store = ingest.PrefixStore()
    assert store.lookup(parse_ipv4("1.2.3.4")) is None
    store.insert(Cidr(0, 0), {"name": "root"})
    assert store.lookup(parse_ipv4("200.1.2.3")) == {"name": "root"}
    store.insert(Cidr.parse("1.0.0.0/8"), {"name": "eight"})
    store.insert(Cidr.parse("1.2.3.0/24"), {"name": "deep"})
    assert store.lookup(parse_ipv4("1.2.3.77")) == {"name": "deep"}
    assert store.lookup(parse_ipv4("1.9.9.9")) == {"name": "eight"}
    store.insert(Cidr.parse("1.2.3.0/24"), {"name": "replaced"})
    assert store.lookup(parse_ipv4("1.2.3.77")) == {"name": "replaced"}


def test_store_lookup_outside_prefix():
    store = ingest.PrefixStore()
    store.insert(Cidr.parse("1.0.0.0/24"), {"v": 1})
    assert store.lookup(parse_ipv4("1.0.0.77")) == {"v": 1}
    assert store.lookup(parse_ipv4("1.0.1.1")) is None


def test_store_lpm_against_bruteforce():
    rng = random.Random(7)
    prefixes = []
    store = ingest.PrefixStore()
    for i in range(600):
        plen = rng.randint(0, 28)
        base = (rng.getrandbits(plen) << (32 - plen)) if plen else 0
        cidr = Cidr(base, plen)
        attrs = {"id": i}
        store.insert(cidr, attrs)
        prefixes.append((cidr, attrs))
    # duplicate-insert rule: last wins
    latest = {}
    for cidr, attrs in prefixes:
        latest[cidr] = attrs
    for _ in range(20000):
        ip = rng.getrandbits(32)
        best = None
        best_len = -1
        for cidr, attrs in latest.items():
            if cidr.contains(ip) and cidr.len > best_len:
                best, best_len = attrs, cidr.len
        assert store.lookup(ip) == best


def test_store_partition_covers_space():
    store = ingest.PrefixStore()
    store.insert(Cidr.parse("10.0.0.0/8"), {"v": "a"})
    store.insert(Cidr.parse("10.1.0.0/16"), {"v": "b"})
    regions = store.partition()
    assert sum(region.size for region, _ in regions) == 2**32
    bases = sorted(region.base for region, _ in regions)
    assert len(bases) == len(set(bases))
    lookup = {region.base: attrs for region, attrs in regions}
    for region, attrs in regions:
        assert attrs == store.lookup(region.base)
    assert lookup[parse_ipv4("10.1.0.0")] == {"v": "b"}


def test_store_dump_load_round_trip():
    store = ingest.PrefixStore()
    store.insert(Cidr.parse("10.0.0.0/8"), {"asn": 1, "designation": "x"})
    store.insert(Cidr.parse("192.168.0.0/16"), {"asn": 2})
    buf = io.StringIO()
    store.dump(buf)
    reloaded = ingest.PrefixStore.load(io.StringIO(buf.getvalue()))
    assert reloaded.entries() == store.entries()
    assert reloaded.lookup(parse_ipv4("10.5.5.5")) == {"asn": 1, "designation": "x"}


def test_idempotent_reparse_flows():
    text = "1714000000,10.0.0.5,51000,93.184.216.34,443,tcp,12000,down\n"
    records, _ = ingest.parse_flows_csv(io.StringIO(text))
    again, errors = ingest.parse_flows_csv(io.StringIO(ingest.serialize_flows(records)))
    assert not errors and again == records


def test_idempotent_reparse_pfx2as():
    text = "1.0.0.0\t24\t13335\n9.9.9.0\t24\t19281,19282\n"
    records, _ = ingest.parse_pfx2as(io.StringIO(text))
    again, errors = ingest.parse_pfx2as(io.StringIO(ingest.serialize_pfx2as(records)))
    assert not errors and again == records


def test_idempotent_reparse_iana():
    text = "prefix,designation,date,status\n001/8,APNIC,1983-09,ALLOCATED\n"
    records, _ = ingest.parse_iana_csv(io.StringIO(text))
    again, errors = ingest.parse_iana_csv(io.StringIO(ingest.serialize_allocations(records)))
    assert not errors and again == records


@given(st.text())
def test_parsers_terminate_on_arbitrary_text(text):
    for parser in (
        ingest.parse_iana_csv,
        ingest.parse_pfx2as,
        ingest.parse_flows_csv,
        ingest.parse_events_csv,
        ingest.parse_aslinks_csv,
    ):
        records, errors = parser(io.StringIO(text))
        assert isinstance(records, list) and isinstance(errors, list)


def test_misaligned_insert_rejected():
    store = ingest.PrefixStore()
    with pytest.raises(ValueError):
        store.insert(Cidr(parse_ipv4("10.0.0.1"), 8), {})
