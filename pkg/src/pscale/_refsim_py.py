"""Pure-Python cycle-stepped weight-stationary array (fallback kernel).

Must stay event-for-event identical to ``_refsim_core.pyx``.
"""

IDLE = -1


def simulate(sr, sc, t, ar, ac, delay):
    """Step the array clock over every fold of an ``sr x sc`` weight matrix.

    Returns ``(cycles, mac_events, ifmap_reads, filter_reads, psum_reads,
    ofmap_writes)``.
    """
    cycles = macs = ifmap = filt = psum = ofmap = 0
    first = True
    col0 = 0
    while col0 < sc:
        c = min(ac, sc - col0)
        row0 = 0
        while row0 < sr:
            r = min(ar, sr - row0)
            if not first:
                cycles += delay
            first = False
            readback = row0 > 0

            # preload: one weight row per cycle
            for _ in range(r):
                filt += c
                cycles += 1

            # in_reg[a][b]: vector index held by PE (a, b); ps_reg likewise for its psum
            in_reg = [[IDLE] * c for _ in range(r)]
            ps_reg = [[IDLE] * c for _ in range(r)]
            written = 0
            tau = 0
            while written < t * c:
                # descending sweep lets every PE read its neighbours' previous state in place
                for a in range(r - 1, -1, -1):
                    row_in = in_reg[a]
                    row_ps = ps_reg[a]
                    for b in range(c - 1, -1, -1):
                        if b > 0:
                            k = row_in[b - 1]
                        else:
                            k = tau - a
                            if 0 <= k < t:
                                ifmap += 1
                            else:
                                k = IDLE
                        row_in[b] = k
                        if k == IDLE:
                            row_ps[b] = IDLE
                            continue
                        if a == 0:
                            if readback:
                                psum += 1
                        elif ps_reg[a - 1][b] != k:
                            raise RuntimeError("partial sum misaligned with input vector")
                        macs += 1
                        row_ps[b] = k
                        if a == r - 1:
                            ofmap += 1
                            written += 1
                tau += 1
                cycles += 1
            row0 += r
        col0 += c
    return cycles, macs, ifmap, filt, psum, ofmap
