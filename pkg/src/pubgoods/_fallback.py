"""Pure-Python enumeration kernels.

Same signatures and results as the compiled ``_kernels`` module. All inputs
are flat integer sequences prepared by :mod:`pubgoods.kernels`; see there for
the encoding. Every scan is a depth-first lexicographic enumeration that
checks an item (node or gate) as soon as the last coordinate it depends on
has been fixed, and skips the whole subtree below a failed prefix.
"""


def _node_ok(i, k, D, offs, idx, scale, B, E):
    prod = 1
    for t in range(offs[i], offs[i + 1]):
        prod *= D - k[idx[t]]
    a = prod * scale - B[i]
    if a > E[i]:
        return k[i] == D
    if a < -E[i]:
        return k[i] == 0
    return True


def grid_scan(n, D, offs, idx, ready_offs, ready_nodes, scale, B, E, subtree, first_only):
    """Grid profiles ``k/D`` whose ready nodes all play epsilon-best-responses.

    Returns ``(accepted, covered)``: accepted numerator tuples in lexicographic
    order, and the number of grid profiles decided (always ``(D+1)**n`` unless
    stopped early by ``first_only``).
    """
    accepted = []
    covered = 0
    k = [0] * n
    t = 0
    while True:
        ok = True
        for r in range(ready_offs[t], ready_offs[t + 1]):
            if not _node_ok(ready_nodes[r], k, D, offs, idx, scale, B, E):
                ok = False
                break
        if ok and t < n - 1:
            t += 1
            k[t] = 0
            continue
        covered += subtree[t]
        if ok:
            accepted.append(tuple(k))
            if first_only:
                return accepted, covered
        while t >= 0 and k[t] == D:
            t -= 1
        if t < 0:
            return accepted, covered
        k[t] += 1


def profile_violation(n, D, offs, idx, scale, B, E, k):
    """Index of the first node not playing an epsilon-best-response, or -1."""
    for i in range(n):
        if not _node_ok(i, k, D, offs, idx, scale, B, E):
            return i
    return -1


def _gate_ok(g, x, gtype, gu, gv, gw):
    xu, xv, xw = x[gu[g]], x[gv[g]], x[gw[g]]
    if gtype[g] == 0:
        if xu == 0 and xv == 0:
            return xw == 1
        if xu == 1 or xv == 1:
            return xw == 0
        return True
    if xv == 2 and xw == 2:
        return False
    return xu == 2 or (xv == xu and xw == xu)


def circuit_scan(n, gtype, gu, gv, gw, ready_offs, ready_gates):
    """All assignments in {0, 1, 2}^n (2 meaning ⊥) satisfying every gate."""
    found = []
    x = [0] * n
    t = 0
    while True:
        ok = True
        for r in range(ready_offs[t], ready_offs[t + 1]):
            if not _gate_ok(ready_gates[r], x, gtype, gu, gv, gw):
                ok = False
                break
        if ok and t < n - 1:
            t += 1
            x[t] = 0
            continue
        if ok:
            found.append(tuple(x))
        while t >= 0 and x[t] == 2:
            t -= 1
        if t < 0:
            return found
        x[t] += 1


def pure_scan(n, offs, idx, ready_offs, ready_nodes):
    """All pure profiles in which every ready node best-responds exactly."""
    found = []
    a = [0] * n
    t = 0
    while True:
        ok = True
        for r in range(ready_offs[t], ready_offs[t + 1]):
            i = ready_nodes[r]
            covered = False
            for e in range(offs[i], offs[i + 1]):
                if a[idx[e]]:
                    covered = True
                    break
            if covered == bool(a[i]):
                ok = False
                break
        if ok and t < n - 1:
            t += 1
            a[t] = 0
            continue
        if ok:
            found.append(tuple(a))
        while t >= 0 and a[t] == 1:
            t -= 1
        if t < 0:
            return found
        a[t] += 1
