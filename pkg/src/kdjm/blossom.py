"""Exact maximum-weight matching in general graphs (weighted blossom algorithm).

Primal-dual method with O(n^3) total time.  Vertex duals are stored doubled so
that integer weights keep every dual variable integral.
"""

from __future__ import annotations

import warnings
from array import array
from typing import Sequence

import numpy as np

try:
    import rustworkx
except ImportError:  # optional compiled backend
    rustworkx = None

LIBRARY = "lib"
WARM = "warm"
PLAIN = "plain"
MODES = (LIBRARY, WARM, PLAIN)


def _library_matching(nvertex: int, edges: Sequence[tuple[int, int, int]]) -> list[int] | None:
    """Maximum-weight matching from rustworkx, or None if it is not installed."""
    if rustworkx is None:
        warnings.warn("rustworkx is not installed; using the built-in blossom code",
                      RuntimeWarning, stacklevel=3)
        return None
    graph = rustworkx.PyGraph()
    graph.add_nodes_from(range(nvertex))
    graph.add_edges_from(list(edges))
    mate = [-1] * nvertex
    for i, j in rustworkx.max_weight_matching(graph, weight_fn=int):
        mate[i], mate[j] = j, i
    return mate


def max_weight_matching(
    nvertex: int,
    edges: Sequence[tuple[int, int, int]],
    mode: str = WARM,
) -> list[int]:
    """Return ``mate`` with ``mate[v]`` the partner of ``v`` or -1.

    ``edges`` are ``(i, j, w)`` triples over vertices ``0..nvertex-1`` with
    positive integer weights and no parallel edges.  Both modes return a
    maximum-weight matching.  ``mode="plain"`` is the textbook stage loop that
    starts from the empty matching and rebuilds all alternating trees after
    every augmentation.  ``mode="warm"`` starts from a maximal matching of
    edges that are tight under the initial duals, keeps the trees that an
    augmentation leaves untouched, and does the per-stage bookkeeping with
    numpy.  ``mode="lib"`` delegates to the compiled rustworkx solver when it
    is installed and falls back to ``"warm"`` otherwise.
    """
    if mode not in MODES:
        raise ValueError(f"unknown blossom mode {mode!r}")
    nedge = len(edges)
    if nedge == 0:
        return [-1] * nvertex
    if mode == LIBRARY:
        mate = _library_matching(nvertex, edges)
        if mate is not None:
            return mate
        mode = WARM

    maxweight = max(0, max(w for _, _, w in edges))
    if maxweight >= 1 << 60:
        # duals must fit the int64 buffers used by the warm driver
        mode = PLAIN

    # endpoint[p]: vertex of endpoint p; edge k has endpoints 2k and 2k+1
    endpoint = [edges[p // 2][p % 2] for p in range(2 * nedge)]
    neighbend: list[list[int]] = [[] for _ in range(nvertex)]
    for k, (i, j, _w) in enumerate(edges):
        neighbend[i].append(2 * k + 1)
        neighbend[j].append(2 * k)

    # mate[v]: remote endpoint of v's matched edge, -1 if single
    mate = [-1] * nvertex
    # label per top-level blossom: 0 unlabeled, 1 S, 2 T (bit 4 marks scans)
    label = [0] * (2 * nvertex)
    labelend = [-1] * (2 * nvertex)
    inblossom = list(range(nvertex))
    blossomparent = [-1] * (2 * nvertex)
    blossomchilds: list[list[int] | None] = [None] * (2 * nvertex)
    blossombase = list(range(nvertex)) + [-1] * nvertex
    blossomendps: list[list[int] | None] = [None] * (2 * nvertex)
    bestedge = [-1] * (2 * nvertex)
    blossombestedges: list[list[int] | None] = [None] * (2 * nvertex)
    unusedblossoms = list(range(nvertex, 2 * nvertex))
    dualvar = [maxweight] * nvertex + [0] * nvertex
    allowedge = [False] * nedge
    queue: list[int] = []

    twice = [2 * wt for _, _, wt in edges]

    def slack(k: int) -> int:
        i, j, _ = edges[k]
        return dualvar[i] + dualvar[j] - twice[k]

    def blossom_leaves(b: int):
        if b < nvertex:
            yield b
        else:
            for t in blossomchilds[b]:
                if t < nvertex:
                    yield t
                else:
                    yield from blossom_leaves(t)

    def assign_label(w: int, t: int, p: int) -> None:
        b = inblossom[w]
        label[w] = label[b] = t
        labelend[w] = labelend[b] = p
        bestedge[w] = bestedge[b] = -1
        if t == 1:
            queue.extend(blossom_leaves(b))
        else:
            base = blossombase[b]
            assign_label(endpoint[mate[base]], 1, mate[base] ^ 1)

    def scan_blossom(v: int, w: int) -> int:
        # trace back from v and w to find a common base (new blossom) or -1
        path = []
        base = -1
        while v != -1 or w != -1:
            b = inblossom[v]
            if label[b] & 4:
                base = blossombase[b]
                break
            path.append(b)
            label[b] = 5
            if labelend[b] == -1:
                v = -1
            else:
                v = endpoint[labelend[b]]
                b = inblossom[v]
                v = endpoint[labelend[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            label[b] = 1
        return base

    def add_blossom(base: int, k: int) -> None:
        v, w, _wt = edges[k]
        bb = inblossom[base]
        bv = inblossom[v]
        bw = inblossom[w]
        b = unusedblossoms.pop()
        blossombase[b] = base
        blossomparent[b] = -1
        blossomparent[bb] = b
        blossomchilds[b] = path = []
        blossomendps[b] = endps = []
        while bv != bb:
            blossomparent[bv] = b
            path.append(bv)
            endps.append(labelend[bv])
            v = endpoint[labelend[bv]]
            bv = inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            blossomparent[bw] = b
            path.append(bw)
            endps.append(labelend[bw] ^ 1)
            w = endpoint[labelend[bw]]
            bw = inblossom[w]
        label[b] = 1
        labelend[b] = labelend[bb]
        dualvar[b] = 0
        for v in blossom_leaves(b):
            if label[inblossom[v]] == 2:
                # former T-vertices become S-vertices inside the new blossom
                queue.append(v)
            inblossom[v] = b
        bestedgeto = [-1] * (2 * nvertex)
        for bv in path:
            if blossombestedges[bv] is None:
                nblists = [[p // 2 for p in neighbend[v]] for v in blossom_leaves(bv)]
            else:
                nblists = [blossombestedges[bv]]
            for nblist in nblists:
                for kk in nblist:
                    i, j, _ = edges[kk]
                    if inblossom[j] == b:
                        i, j = j, i
                    bj = inblossom[j]
                    if (bj != b and label[bj] == 1
                            and (bestedgeto[bj] == -1 or slack(kk) < slack(bestedgeto[bj]))):
                        bestedgeto[bj] = kk
            blossombestedges[bv] = None
            bestedge[bv] = -1
        blossombestedges[b] = [kk for kk in bestedgeto if kk != -1]
        bestedge[b] = -1
        for kk in blossombestedges[b]:
            if bestedge[b] == -1 or slack(kk) < slack(bestedge[b]):
                bestedge[b] = kk

    def expand_blossom(b: int, endstage: bool) -> None:
        for s in blossomchilds[b]:
            blossomparent[s] = -1
            if s < nvertex:
                inblossom[s] = s
            elif endstage and dualvar[s] == 0:
                expand_blossom(s, endstage)
            else:
                for v in blossom_leaves(s):
                    inblossom[v] = s
        if not endstage and label[b] == 2:
            # relabel the even-length path from the entry child to the base
            entrychild = inblossom[endpoint[labelend[b] ^ 1]]
            childs = blossomchilds[b]
            endps = blossomendps[b]
            j = childs.index(entrychild)
            if j & 1:
                j -= len(childs)
                jstep, endptrick = 1, 0
            else:
                jstep, endptrick = -1, 1
            p = labelend[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                label[endpoint[endps[j - endptrick] ^ endptrick ^ 1]] = 0
                assign_label(endpoint[p ^ 1], 2, p)
                allowedge[endps[j - endptrick] // 2] = True
                j += jstep
                p = endps[j - endptrick] ^ endptrick
                allowedge[p // 2] = True
                j += jstep
            bv = childs[j]
            label[endpoint[p ^ 1]] = label[bv] = 2
            labelend[endpoint[p ^ 1]] = labelend[bv] = p
            bestedge[bv] = -1
            j += jstep
            while childs[j] != entrychild:
                bv = childs[j]
                if label[bv] == 1:
                    j += jstep
                    continue
                for v in blossom_leaves(bv):
                    if label[v] != 0:
                        break
                if label[v] != 0:
                    label[v] = 0
                    label[endpoint[mate[blossombase[bv]]]] = 0
                    assign_label(v, 2, labelend[v])
                j += jstep
        label[b] = labelend[b] = -1
        blossomchilds[b] = blossomendps[b] = None
        blossombase[b] = -1
        blossombestedges[b] = None
        bestedge[b] = -1
        unusedblossoms.append(b)

    def augment_blossom(b: int, v: int) -> None:
        t = v
        while blossomparent[t] != b:
            t = blossomparent[t]
        if t >= nvertex:
            augment_blossom(t, v)
        childs = blossomchilds[b]
        endps = blossomendps[b]
        i = j = childs.index(t)
        if i & 1:
            j -= len(childs)
            jstep, endptrick = 1, 0
        else:
            jstep, endptrick = -1, 1
        while j != 0:
            j += jstep
            t = childs[j]
            p = endps[j - endptrick] ^ endptrick
            if t >= nvertex:
                augment_blossom(t, endpoint[p])
            j += jstep
            t = childs[j]
            if t >= nvertex:
                augment_blossom(t, endpoint[p ^ 1])
            mate[endpoint[p]] = p ^ 1
            mate[endpoint[p ^ 1]] = p
        blossomchilds[b] = childs[i:] + childs[:i]
        blossomendps[b] = endps[i:] + endps[:i]
        blossombase[b] = blossombase[blossomchilds[b][0]]

    def augment_matching(k: int) -> None:
        v, w, _wt = edges[k]
        for s, p in ((v, 2 * k + 1), (w, 2 * k)):
            while True:
                bs = inblossom[s]
                if bs >= nvertex:
                    augment_blossom(bs, s)
                mate[s] = p
                if labelend[bs] == -1:
                    break
                t = endpoint[labelend[bs]]
                bt = inblossom[t]
                s = endpoint[labelend[bt]]
                j = endpoint[labelend[bt] ^ 1]
                if bt >= nvertex:
                    augment_blossom(bt, j)
                mate[j] = labelend[bt]
                p = labelend[bt] ^ 1

    if mode == WARM:
        # edges of maximum weight are tight under the initial duals; any
        # matching of them is a valid starting point for the first stage
        for k in sorted(range(nedge), key=lambda k: (-edges[k][2], k)):
            i, j, wt = edges[k]
            if wt != maxweight:
                break
            if mate[i] == -1 and mate[j] == -1:
                mate[i] = 2 * k + 1
                mate[j] = 2 * k

    def scan(v: int) -> int:
        """Scan the edges of S-vertex ``v``; return an augmenting edge or -1."""
        for p in neighbend[v]:
            k = p // 2
            w = endpoint[p]
            if inblossom[v] == inblossom[w]:
                continue
            if not allowedge[k]:
                kslack = dualvar[v] + dualvar[w] - twice[k]
                if kslack <= 0:
                    allowedge[k] = True
            if allowedge[k]:
                if label[inblossom[w]] == 0:
                    assign_label(w, 2, p ^ 1)
                elif label[inblossom[w]] == 1:
                    base = scan_blossom(v, w)
                    if base >= 0:
                        add_blossom(base, k)
                    else:
                        return k
                elif label[w] == 0:
                    label[w] = 2
                    labelend[w] = p ^ 1
            elif label[inblossom[w]] == 1:
                b = inblossom[v]
                if bestedge[b] == -1 or kslack < slack(bestedge[b]):
                    bestedge[b] = k
            elif label[w] == 0:
                if bestedge[w] == -1 or kslack < slack(bestedge[w]):
                    bestedge[w] = k
        return -1

    def apply_dual_step(step: tuple[int, int, int, int]) -> bool:
        """Act on the edge or blossom that became tight; False at the optimum."""
        deltatype, _delta, deltaedge, deltablossom = step
        if deltatype == 1:
            return False
        if deltatype == 2:
            allowedge[deltaedge] = True
            i, j, _ = edges[deltaedge]
            if label[inblossom[i]] == 0:
                i, j = j, i
            queue.append(i)
        elif deltatype == 3:
            allowedge[deltaedge] = True
            i, _j, _ = edges[deltaedge]
            queue.append(i)
        else:
            expand_blossom(deltablossom, False)
        return True

    def expand_zero_s_blossoms(tops) -> None:
        for b in tops:
            if (b >= nvertex and blossomparent[b] == -1 and blossombase[b] >= 0
                    and label[b] == 1 and dualvar[b] == 0):
                expand_blossom(b, True)

    def dual_step_plain() -> tuple[int, int, int, int]:
        deltatype = 1
        delta = min(dualvar[:nvertex])
        deltaedge = deltablossom = -1
        for v in range(nvertex):
            if label[inblossom[v]] == 0 and bestedge[v] != -1:
                d = slack(bestedge[v])
                if d < delta:
                    delta, deltatype, deltaedge = d, 2, bestedge[v]
        for b in range(2 * nvertex):
            if blossomparent[b] == -1 and label[b] == 1 and bestedge[b] != -1:
                d = slack(bestedge[b]) // 2
                if d < delta:
                    delta, deltatype, deltaedge = d, 3, bestedge[b]
        for b in range(nvertex, 2 * nvertex):
            if (blossombase[b] >= 0 and blossomparent[b] == -1
                    and label[b] == 2 and dualvar[b] < delta):
                delta, deltatype, deltablossom = dualvar[b], 4, b

        for v in range(nvertex):
            lb = label[inblossom[v]]
            if lb == 1:
                dualvar[v] -= delta
            elif lb == 2:
                dualvar[v] += delta
        for b in range(nvertex, 2 * nvertex):
            if blossombase[b] >= 0 and blossomparent[b] == -1:
                if label[b] == 1:
                    dualvar[b] += delta
                elif label[b] == 2:
                    dualvar[b] -= delta
        return deltatype, delta, deltaedge, deltablossom

    if mode == PLAIN:
        for _stage in range(nvertex):
            label[:] = [0] * (2 * nvertex)
            bestedge[:] = [-1] * (2 * nvertex)
            blossombestedges[nvertex:] = [None] * nvertex
            allowedge[:] = [False] * nedge
            queue[:] = []
            for v in range(nvertex):
                if mate[v] == -1 and label[inblossom[v]] == 0:
                    assign_label(v, 1, -1)
            augmented = False
            while not augmented:
                while queue:
                    k = scan(queue.pop())
                    if k >= 0:
                        augment_matching(k)
                        augmented = True
                        break
                if not augmented and not apply_dual_step(dual_step_plain()):
                    break
            if not augmented:
                break
            expand_zero_s_blossoms(range(nvertex, 2 * nvertex))
        return [endpoint[p] if p >= 0 else -1 for p in mate]

    # Warm mode keeps every alternating tree that an augmentation does not
    # touch, and rebuilds the per-stage bookkeeping with array operations.
    # The hot state moves to int64 buffers so numpy can view it without copies.
    label = array("q", label)
    inblossom = array("q", inblossom)
    dualvar = array("q", dualvar)
    bestedge = array("q", bestedge)
    label_v = np.frombuffer(label, dtype=np.int64)
    inblossom_v = np.frombuffer(inblossom, dtype=np.int64)
    dual_v = np.frombuffer(dualvar, dtype=np.int64)
    bestedge_v = np.frombuffer(bestedge, dtype=np.int64)
    ei = np.fromiter((e[0] for e in edges), dtype=np.int64, count=nedge)
    ej = np.fromiter((e[1] for e in edges), dtype=np.int64, count=nedge)
    w2 = np.array(twice, dtype=np.int64)

    def group_argmin(keys, cand, values):
        # for each distinct key, a candidate with the smallest value
        low = np.full(2 * nvertex, np.iinfo(np.int64).max, dtype=np.int64)
        np.minimum.at(low, keys, values)
        hit = values == low[keys]
        best = np.full(2 * nvertex, -1, dtype=np.int64)
        best[keys[hit]] = cand[hit]
        found = np.flatnonzero(best >= 0)
        return found.tolist(), best[found].tolist()

    def top_blossoms() -> list[int]:
        # every top-level blossom contains at least one vertex
        return sorted(set(inblossom))

    def reseed() -> None:
        """Recompute edge caches, least-slack edges and T-blossom marks.

        Queues exactly the S-vertices that have a tight edge leading to an
        unlabeled vertex or to a different S-blossom.
        """
        top = inblossom_v.copy()
        toplab = label_v[top]
        dv = dual_v[:nvertex]
        sl = dv[ei] + dv[ej] - w2
        li, lj = toplab[ei], toplab[ej]
        ti, tj = top[ei], top[ej]
        diff = ti != tj
        tight = diff & (sl <= 0)
        loose = diff & ~tight
        si, sj = li == 1, lj == 1
        allowedge[:] = [False] * nedge
        bestedge_v.fill(-1)
        blossombestedges[:] = [None] * (2 * nvertex)
        queue[:] = []

        hot_i = np.flatnonzero(tight & si & (lj != 2))
        hot_j = np.flatnonzero(tight & sj & (li != 2))
        if len(hot_i) or len(hot_j):
            queue.extend(np.unique(np.concatenate((ei[hot_i], ej[hot_j]))).tolist())

        to_i = np.flatnonzero(loose & sj & (li == 0))
        to_j = np.flatnonzero(loose & si & (lj == 0))
        if len(to_i) or len(to_j):
            cand = np.concatenate((to_i, to_j))
            keys = np.concatenate((ei[to_i], ej[to_j]))
            for w, k in zip(*group_argmin(keys, cand, sl[cand])):
                bestedge[w] = k
        both = np.flatnonzero(loose & si & sj)
        if len(both):
            keys = np.concatenate((ti[both], tj[both]))
            cand = np.concatenate((both, both))
            for b, k in zip(*group_argmin(keys, cand, sl[cand])):
                bestedge[b] = k

        # marks on vertices inside T-blossoms reached by a tight edge
        entries = set()
        for b in top_blossoms():
            if b >= nvertex and label[b] == 2:
                entry = endpoint[labelend[b] ^ 1]
                entries.add(entry)
                for y in blossom_leaves(b):
                    if y != entry:
                        label[y] = 0
        mark_i = np.flatnonzero(tight & sj & (li == 2) & (ti >= nvertex))
        mark_j = np.flatnonzero(tight & si & (lj == 2) & (tj >= nvertex))
        for k in mark_i.tolist():
            y = edges[k][0]
            if y not in entries:
                label[y] = 2
                labelend[y] = 2 * k + 1
        for k in mark_j.tolist():
            y = edges[k][1]
            if y not in entries:
                label[y] = 2
                labelend[y] = 2 * k

    def clear_labels(b: int) -> None:
        label[b] = 0
        labelend[b] = -1
        if b >= nvertex:
            for t in blossomchilds[b]:
                clear_labels(t)

    def augment_and_dissolve(k: int) -> None:
        root: dict[int, int] = {}

        def root_of(b: int) -> int:
            chain = []
            while b not in root:
                if labelend[b] == -1:
                    root[b] = b
                    break
                chain.append(b)
                b = inblossom[endpoint[labelend[b]]]
            r = root[b]
            for c in chain:
                root[c] = r
            return r

        i, j, _ = edges[k]
        roots = {root_of(inblossom[i]), root_of(inblossom[j])}
        doomed = [b for b in top_blossoms() if label[b] != 0 and root_of(b) in roots]
        was_s = [b for b in doomed if label[b] == 1]
        augment_matching(k)
        for b in doomed:
            clear_labels(b)
        for b in was_s:
            label[b] = 1
        expand_zero_s_blossoms(was_s)
        for b in was_s:
            if blossombase[b] >= 0:
                label[b] = 0

    def dual_step() -> tuple[int, int, int, int]:
        lab = label_v
        top = inblossom_v
        dv = dual_v
        be = bestedge_v
        is_top = np.zeros(2 * nvertex, dtype=bool)
        is_top[top] = True
        vlab = lab[top]
        deltatype, deltaedge, deltablossom = 1, -1, -1
        delta = int(dv[:nvertex].min())
        cand = np.flatnonzero((vlab == 0) & (be[:nvertex] != -1))
        if len(cand):
            e = be[cand]
            d = dv[ei[e]] + dv[ej[e]] - w2[e]
            i = int(np.argmin(d))
            if d[i] < delta:
                delta, deltatype, deltaedge = int(d[i]), 2, int(e[i])
        cand = np.flatnonzero(is_top & (lab == 1) & (be != -1))
        if len(cand):
            e = be[cand]
            d = (dv[ei[e]] + dv[ej[e]] - w2[e]) // 2
            i = int(np.argmin(d))
            if d[i] < delta:
                delta, deltatype, deltaedge = int(d[i]), 3, int(e[i])
        cand = nvertex + np.flatnonzero(is_top[nvertex:] & (lab[nvertex:] == 2))
        if len(cand):
            i = int(np.argmin(dv[cand]))
            if dv[cand[i]] < delta:
                delta, deltatype, deltablossom = int(dv[cand[i]]), 4, int(cand[i])
        if delta:
            dv[:nvertex][vlab == 1] -= delta
            dv[:nvertex][vlab == 2] += delta
            bl = lab[nvertex:]
            tb = is_top[nvertex:]
            dv[nvertex:][tb & (bl == 1)] += delta
            dv[nvertex:][tb & (bl == 2)] -= delta
        return deltatype, delta, deltaedge, deltablossom

    for v in range(nvertex):
        if mate[v] == -1 and label[inblossom[v]] == 0:
            assign_label(v, 1, -1)
    reseed()
    while True:
        while queue:
            v = queue.pop()
            if label[inblossom[v]] != 1:
                continue
            k = scan(v)
            if k >= 0:
                augment_and_dissolve(k)
                reseed()
        if not apply_dual_step(dual_step()):
            break
    return [endpoint[p] if p >= 0 else -1 for p in mate]
