"""Flow queries vs brute-force path enumeration on random graphs."""

from reentriage.flow import StateWrite, guards_of, writes_after
from reentriage.frontend.ast_nodes import Span

from oracles import (
    guard_key, oracle_guard_set, oracle_positions_after, random_cfg,
    site_positions,
)


def unique_writes(cfg):
    """One distinctly named write per position, so the returned write set
    identifies exactly which positions the query visited."""
    by_pos = {}
    for b, block in cfg.blocks.items():
        n = len(block.statements) + (1 if block.condition is not None else 0)
        for idx in range(n):
            by_pos[(b, idx)] = [StateWrite(f"w{b}_{idx}", f"w{b}_{idx}",
                                           "assign", Span(b, idx, 0, 0))]
    return by_pos


def names_for(positions):
    return {f"w{b}_{i}" for b, i in positions}


def test_writes_after_matches_enumeration():
    for seed in range(80):
        cfg = random_cfg(seed)
        by_pos = unique_writes(cfg)
        for b in cfg.blocks:
            for idx in site_positions(cfg, b):
                for same in (False, True):
                    got = {w.var for w in
                           writes_after(cfg, b, idx, by_pos, same)}
                    want = names_for(
                        oracle_positions_after(cfg, b, idx, same))
                    assert got == want, (seed, b, idx, same)


def test_guards_match_enumeration():
    for seed in range(80):
        cfg = random_cfg(seed)
        for b in cfg.reachable:
            for idx in site_positions(cfg, b):
                got = {guard_key(g) for g in guards_of(cfg, b, idx)}
                want = oracle_guard_set(cfg, b, idx)
                assert got == want, (seed, b, idx)


def test_unreachable_block_has_no_guards():
    for seed in range(40):
        cfg = random_cfg(seed)
        for b in cfg.blocks:
            if b in cfg.reachable:
                continue
            assert guards_of(cfg, b, 0) == []
