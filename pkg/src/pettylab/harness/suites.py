"""Verification suites.

Each builder takes a SuiteConfig and returns ``(statement, cases)`` where
``cases`` is a list of ``(case_id, thunk)``; a thunk returns one CaseRecord
or a list of them.  Shared references (ball products, quadratures) are
computed while building, so thunks can run in any order.
"""
import math

import numpy as np

from .. import bodies as bd
from ..bodies import (Ball, EllipsoidImage, HPolytope, MatShape, Segment, VertexPolytope, make_standard,
                      polytope_from_support, random_polytope, regular_polygon, sphere_directions,
                      unit_ball_volume)
from ..errors import ConfigError, PettyLabError
from ..measure import (MC, PRODUCT, VolumeEstimate, difference, mc_volume, polar_volume_function,
                       santalo_point, sphere_quadrature)
from ..operators import (PolarProjectionBody, centroid_body, duality_check, fixed_point_constant,
                         opnorm_ball, petty_product, pi_infinity, projection_body)
from ..report import CaseRecord
from ..seeding import derive_seed, rng as make_rng

# -- shared helpers -------------------------------------------------------------------

_Q_NAMES = {
    "unit_segment": lambda: Segment(MatShape(1, 1), [-0.5], [0.5]),
    "sym_segment": lambda: Segment(MatShape(1, 1), [-1.0], [1.0]),
    "pos_segment": lambda: Segment(MatShape(1, 1), [0.0], [1.0]),
    "simplex": lambda: make_standard("simplex_orth", MatShape(1, 2)),
    "neg_simplex": lambda: VertexPolytope(MatShape(1, 2), [[0, 0], [-1, 0], [0, -1]]),
    "square": lambda: make_standard("cube", MatShape(1, 2)),
    "box": lambda: VertexPolytope(MatShape(1, 2), [[0, 0], [1, 0], [0, 2], [1, 2]]),
    "disk": lambda: Ball(MatShape(1, 2)),
}


def q_body(desc):
    """Q from a catalog name, {"segment": [a, b]}, or a body descriptor."""
    if isinstance(desc, str):
        if desc not in _Q_NAMES:
            raise ConfigError(f"unknown Q {desc!r}; known names: {', '.join(_Q_NAMES)}")
        return desc, _Q_NAMES[desc]()
    if "segment" in desc:
        a, b = desc["segment"]
        return f"[{a:g},{b:g}]", Segment(MatShape(1, 1), [a], [b])
    try:
        return desc.get("name", desc["kind"]), bd.from_json(desc)
    except (KeyError, PettyLabError) as e:
        raise ConfigError(f"bad Q descriptor {desc!r}: {e}") from None


def _quad(cfg, d, key="quad", size=None, replicates=None):
    q = cfg["quadrature"]
    return sphere_quadrature(d, size=size or q["size"], replicates=replicates or q["replicates"],
                             seed=derive_seed(cfg.seed, cfg.suite, key, d))


# Replicates behind a 3-sigma equality test between two randomized estimates.
# With R replicates margin/stderr is roughly Student-t with R-1 degrees of
# freedom, and P(|t_7| > 3) is 2%, seven times the normal rate.
PAIR_REPLICATES = 32


def _seed(cfg, *keys):
    return derive_seed(cfg.seed, cfg.suite, *keys)


def _random_matrix(g, d, spread=0.6):
    """Random well-conditioned d x d matrix: rotation times log-uniform scales."""
    Qm, _ = np.linalg.qr(g.standard_normal((d, d)))
    return Qm * np.exp(g.uniform(-spread, spread, d))


def random_star(shape, g, kind):
    """Random ellipsoid image or rotated box with the origin inside, in M[n,m]."""
    d = shape.dim
    if kind == "ellipsoid":
        return EllipsoidImage(shape, _random_matrix(g, d))
    R, _ = np.linalg.qr(g.standard_normal((d, d)))
    w = np.exp(g.uniform(-0.4, 0.4, d))
    c = g.uniform(-0.5, 0.5, d) * w
    return HPolytope(shape, np.vstack([R / (w + c)[:, None], -R / (w - c)[:, None]]))


def planar_volume(body, k=1024):
    """Volume of a convex body in R^2 or R^3 from its support function (outer polytope)."""
    n = body.dim
    if n != 2:
        return polytope_from_support(body, sphere_directions(n, 4 * k)).volume()
    t = 2 * np.pi * np.arange(k) / k
    U = np.column_stack([np.cos(t), np.sin(t)])
    h = body.support(U)
    # vertices of the outer polygon: consecutive support lines meet at
    # x_j = (h_j u_{j+1} - h_{j+1} u_j) rotated, divided by sin(dt)
    h1 = np.roll(h, -1)
    U1 = np.roll(U, -1, axis=0)
    s = math.sin(2 * np.pi / k)
    X = np.column_stack([h * U1[:, 1] - h1 * U[:, 1], h1 * U[:, 0] - h * U1[:, 0]]) / s
    return 0.5 * abs(float(np.sum(X[:, 0] * np.roll(X[:, 1], -1) - np.roll(X[:, 0], -1) * X[:, 1])))


def _product(K, Q, p, quad):
    """Petty product, exact when p = 1 and both bodies are polytopes with nm <= 3."""
    exact = (p == 1 and isinstance(K, VertexPolytope) and isinstance(Q, VertexPolytope)
             and K.dim * Q.dim <= 3)
    return petty_product(K, Q, p, None if exact else quad)


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _paired(case, a, b, tol, rel=None, seed=None, equality=False, **extra):
    diff, se = difference(a, b)
    make = CaseRecord.equality if equality else CaseRecord.inequality
    rec = make(case, a.value, b.value, se, tol, rel=rel, seed=seed, **extra)
    # the paired difference carries the comparison; keep its stderr
    rec.margin = abs(diff) if equality else diff
    rec.passed = tol.allows(rec.margin, se, scale=max(abs(a.value), abs(b.value)), rel=rel)
    return rec


# -- petty ------------------------------------------------------------------------------

def petty(cfg):
    tol = cfg.tolerances
    n = cfg["n"]
    cases = []
    for qd in cfg["Q"]:
        qname, Q = q_body(qd)
        m = Q.shape.m
        quad = _quad(cfg, n * m)
        pquad = quad
        if quad.scheme != PRODUCT and cfg["pairs"]:
            pquad = _quad(cfg, n * m, "pairs", replicates=max(PAIR_REPLICATES, cfg["quadrature"]["replicates"]))
        bs = cfg["quadrature"].get("ball_size")
        for p in cfg["p"]:
            tag = f"Q={qname}/p={p:g}"
            ball = petty_product(Ball(MatShape(n, 1)), Q, p, quad, ball_size=bs)
            rel = tol.quadrature if quad.scheme == PRODUCT else None

            def ball_case(ball=ball, Q=Q, p=p, quad=quad, tag=tag, rel=rel):
                fine = petty_product(Ball(MatShape(n, 1)), Q, p, quad,
                                     ball_size=2 * (bs or {1: 2, 2: 2048, 3: 3200}[n]))
                return _paired(f"{tag}/ball", ball, fine, tol, rel=rel, equality=True)
            cases.append((f"{tag}/ball", ball_case))

            if n == 2 and m == 1 and p == 1 and isinstance(Q, Segment):
                a, b = -float(Q.vertices.min()), float(Q.vertices.max())

                def closed(ball=ball, a=a, b=b, tag=tag):
                    return CaseRecord.equality(f"{tag}/ball-closed-form", ball.value,
                                               math.pi ** 2 / (4 * (a + b) ** 2), ball.stderr, tol, rel=5e-3)

                def square(Q=Q, a=a, b=b, tag=tag):
                    v = petty_product(make_standard("cube", MatShape(2, 1)), Q, 1, method="exact")
                    return CaseRecord.equality(f"{tag}/square-exact", v.value, 2 / (a + b) ** 2, 0.0, tol,
                                               rel=tol.closed_form)
                cases += [(f"{tag}/ball-closed-form", closed), (f"{tag}/square-exact", square)]

            for i in range(cfg["count"]):
                def poly(i=i, Q=Q, p=p, quad=quad, ball=ball, tag=tag):
                    s = _seed(cfg, "polygon", n, i)
                    K = random_polytope(MatShape(n, 1), cfg["vertices"], s)
                    return _paired(f"{tag}/polygon-{i:04d}", _product(K, Q, p, quad), ball, tol, seed=s)
                cases.append((f"{tag}/polygon-{i:04d}", poly))

            for i in range(cfg["cases"]):
                def ell(i=i, Q=Q, p=p, quad=quad, ball=ball, tag=tag, rel=rel):
                    s = _seed(cfg, "ellipsoid", n, i)
                    A = _random_matrix(make_rng(s), n)
                    E = EllipsoidImage(MatShape(n, 1), A)
                    v = petty_product(E, Q, p, quad, ball_size=bs)
                    return _paired(f"{tag}/ellipsoid-{i:04d}", v, ball, tol, rel=rel, seed=s, equality=True,
                                   A=A)
                cases.append((f"{tag}/ellipsoid-{i:04d}", ell))

            for i in range(cfg["pairs"]):
                def pair(i=i, Q=Q, p=p, quad=pquad, tag=tag):
                    s = _seed(cfg, "affine", n, i)
                    g = make_rng(s)
                    K = random_polytope(MatShape(n, 1), cfg["vertices"], s)
                    A = _random_matrix(g, n, spread=1.0) * g.choice([-1.0, 1.0])
                    # p = 1 is affine invariant; p > 1 only linearly
                    t = g.uniform(-0.3, 0.3, n) if p == 1 else np.zeros(n)
                    KA = VertexPolytope(K.shape, K.vertices @ A.T + t)
                    a, b = _product(KA, Q, p, quad), _product(K, Q, p, quad)
                    r = tol.closed_form if a.method == b.method == "exact" else \
                        (tol.discretization if quad.scheme == PRODUCT else None)
                    return _paired(f"{tag}/affine-{i:04d}", a, b, tol, rel=r, seed=s, equality=True,
                                   A=A, shift=t)
                cases.append((f"{tag}/affine-{i:04d}", pair))
    return ("the Lp Petty product vol(polar projection body) * vol(K)^(nm/p - m) is largest for "
            "ellipsoids and invariant under linear (p > 1) or affine (p = 1) maps"), cases


# -- busemann_petty -------------------------------------------------------------------

def _centroid_ratio(L, Q, p, quad):
    """Per replicate: vol(Gamma L) / vol(L)^(1/m), with Gamma L from the polar form on shared nodes."""
    m = Q.shape.m
    out = []
    for r in range(quad.replicates):
        G = centroid_body(L, Q, p, method="polar", quad=quad, replicate=r)
        out.append(planar_volume(G) / G.source["vol"] ** (1 / m))
    return VolumeEstimate.from_replicates(out, quad.scheme)


def busemann_petty(cfg):
    tol = cfg.tolerances
    n = cfg["n"]
    cases = []
    bs = cfg["quadrature"].get("ball_size")
    for qd in cfg["Q"]:
        qname, Q = q_body(qd)
        m = Q.shape.m
        shape = MatShape(n, m)
        quad = _quad(cfg, n * m)
        for p in cfg["p"]:
            tag = f"Q={qname}/p={p:g}"
            L0 = PolarProjectionBody(projection_body(Ball(MatShape(n, 1)), Q, p, bs))
            ref = _centroid_ratio(L0, Q, p, quad)
            rel = tol.discretization if quad.scheme == PRODUCT else None
            for i in range(cfg["count"]):
                def star(i=i, Q=Q, p=p, quad=quad, ref=ref, tag=tag, rel=rel):
                    s = _seed(cfg, "star", n, m, i)
                    kind = "ellipsoid" if i % 2 == 0 else "box"
                    L = random_star(shape, make_rng(s), kind)
                    return _paired(f"{tag}/{kind}-{i:04d}", ref, _centroid_ratio(L, Q, p, quad), tol, rel=rel,
                                   seed=s, body=L.to_json())
                cases.append((f"{tag}/star-{i:04d}", star))
            for i in range(cfg["cases"]):
                def eq(i=i, Q=Q, p=p, quad=quad, ref=ref, tag=tag, rel=rel):
                    s = _seed(cfg, "equality", n, m, i)
                    A = _random_matrix(make_rng(s), n)
                    L = PolarProjectionBody(projection_body(EllipsoidImage(MatShape(n, 1), A), Q, p, bs))
                    return _paired(f"{tag}/equality-{i:04d}", _centroid_ratio(L, Q, p, quad), ref, tol,
                                   rel=rel, seed=s, equality=True, A=A)
                cases.append((f"{tag}/equality-{i:04d}", eq))
    return ("the ratio vol(Lp centroid body of L) / vol(L)^(1/m) is smallest when L is the polar "
            "projection body of an ellipsoid"), cases


# -- duality ----------------------------------------------------------------------------

def _random_q(g, m):
    if m == 1:
        return Segment(MatShape(1, 1), [-g.uniform(0.2, 1.5)], [g.uniform(0.2, 1.5)])
    P = g.standard_normal((5, m))
    return VertexPolytope(MatShape(1, m), P - P.mean(axis=0))


def duality(cfg):
    tol = cfg.tolerances
    n = cfg["n"]
    cases = []

    def analytic():
        B = Ball(MatShape(2, 1))
        quad = sphere_quadrature(2, PRODUCT, cfg["quadrature"]["size"])
        rep = duality_check(B, B, Segment(MatShape(1, 1), [-1.0], [1.0]), 1, quad, gamma="polar")
        c = rep.cases[0]
        gap = max(_rel(c.lhs, 4 * math.pi), _rel(c.rhs, 4 * math.pi), _rel(c.lhs, c.rhs))
        return CaseRecord("analytic", c.lhs, c.rhs, abs(c.lhs - c.rhs), c.stderr, gap < 1e-6, None,
                          {"exact": 4 * math.pi, "relative_gap": gap})
    cases.append(("analytic", analytic))

    ps = cfg["p"] if len(cfg["p"]) > 1 else [1, 2, 3]
    for i in range(cfg["count"]):
        def rand(i=i):
            s = _seed(cfg, "duality", i)
            g = make_rng(s)
            m = 1 + i % 2
            p = ps[i % len(ps)]
            K = Ball(MatShape(n, 1)) if i % 5 == 4 else random_polytope(MatShape(n, 1), cfg["vertices"], s)
            L = random_star(MatShape(n, m), g, "ellipsoid" if i % 3 else "box")
            Q = _random_q(g, m)
            quad = _quad(cfg, n * m)
            rep = duality_check(K, L, Q, p, quad, gamma="sample", N=cfg["samples"], seed=s, tol=tol)
            c = rep.cases[0]
            gap = _rel(c.lhs, c.rhs)
            ok = gap <= max(1e-2, tol.sigma * c.stderr / max(abs(c.rhs), 1e-300))
            return CaseRecord(f"random-{i:04d}", c.lhs, c.rhs, c.margin, c.stderr, ok, s,
                              {"relative_gap": gap, "m": m, "p": p, "K": K.kind, "L": L.kind})
        cases.append((f"random-{i:04d}", rand))
    return ("the dual mixed volume of L with the polar projection body of K equals "
            "(nm+p) vol(L)/m times the Lp mixed volume of K with the centroid body of L"), cases


# -- fixed point ---------------------------------------------------------------------------

def fixed_point(cfg):
    tol = cfg.tolerances
    specs = [(2, 1.0, "sym_segment", 1e-2), (2, 2.0, "disk", 2e-2)]
    for qd in cfg["Q"]:
        for p in cfg["p"]:
            if (cfg["n"], float(p), qd) not in [s[:3] for s in specs]:
                specs.append((cfg["n"], float(p), qd, 1e-2))
    cases = []
    for n, p, qd, rel in specs:
        qname, Q = q_body(qd)
        m = Q.shape.m

        def run(n=n, m=m, p=p, Q=Q, qname=qname, rel=rel):
            quad = _quad(cfg, n * m)
            L = PolarProjectionBody(projection_body(Ball(MatShape(n, 1)), Q, p))
            G = centroid_body(L, Q, p, method="polar", quad=quad)
            U = sphere_directions(n, cfg["directions"]) if n > 1 else np.array([[1.0], [-1.0]])
            h = G.support(U)
            C = fixed_point_constant(n, m, p)
            worst = float(h[np.argmax(np.abs(h - C))])
            return CaseRecord.equality(f"n={n}/m={m}/p={p:g}/Q={qname}", worst, C, 0.0, tol, rel=rel,
                                       spread=float(h.max() - h.min()), mean=float(h.mean()))
        cases.append((f"n={n}/m={m}/p={p:g}/Q={qname}", run))
    return ("the centroid body of the polar projection body of the unit ball is the ball of radius "
            "(m / (vol(B)(nm+p)))^(1/p)"), cases


# -- steiner -------------------------------------------------------------------------------

def steiner(cfg):
    from ..projfind import find_projection
    from ..symmetrize import inclusion_check, steiner_classical, steiner_sequence, symmetral_volume_gain
    tol = cfg.tolerances
    cases = []
    U = sphere_directions(2, 720)

    for i in range(cfg["polygons"]):
        def area(i=i):
            s = _seed(cfg, "area", i)
            g = make_rng(s)
            K = random_polytope(MatShape(2, 1), cfg["vertices"], s)
            a = g.uniform(0, np.pi)
            v = np.array([np.cos(a), np.sin(a)])
            S = steiner_classical(K, v)
            S2 = steiner_classical(S, v)
            idem = float(np.max(np.abs(S2.support(U) - S.support(U))))
            ok = _rel(S.volume(), K.volume()) <= 1e-12 and idem <= 1e-9
            return CaseRecord(f"area-{i:04d}", S.volume(), K.volume(), abs(S.volume() - K.volume()), 0.0, ok, s,
                              {"idempotence_gap": idem})
        cases.append((f"area-{i:04d}", area))

    for i in range(cfg["count"]):
        def gain(i=i):
            s = _seed(cfg, "gain", i)
            g = make_rng(s)
            L = random_star(MatShape(2, 2), g, "ellipsoid" if i % 2 else "box")
            v = g.standard_normal(2)
            v /= np.linalg.norm(v)
            dv, volL, volS = symmetral_volume_gain(L, v, N=200_000, seed=s)
            return CaseRecord.inequality(f"volume-gain-{i:04d}", 0.0, dv.value, dv.stderr, tol, rel=0.0, seed=s,
                                         vol_L=volL.value, vol_S=volS.value, body=L.kind)
        cases.append((f"volume-gain-{i:04d}", gain))

    qname, Q1 = q_body(cfg["Q"][0])
    p0 = cfg["p"][0]
    for i in range(cfg["cases"]):
        def incl(i=i):
            s = _seed(cfg, "inclusion", i)
            g = make_rng(s)
            K = random_polytope(MatShape(2, 1), cfg["vertices"], s)
            a = g.uniform(0, np.pi)
            v = np.array([np.cos(a), np.sin(a)])
            if i % 2 == 0:
                rep = inclusion_check(K, Q1, p0, v, N=cfg["probes"], seed=s, tol=tol)
            else:
                Q2 = _Q_NAMES["simplex"]()
                P = find_projection(Q2)
                rep = inclusion_check(K, Q2, p0, v, N=cfg["probes"], seed=s, r=P.r, l=P.l, tol=tol)
            out = []
            for c in rep.cases:
                c.case = f"inclusion-{i:04d}/{c.case}"
                out.append(c)
            return out
        cases.append((f"inclusion-{i:04d}", incl))

        def chain(i=i):
            s = _seed(cfg, "chain", i)
            g = make_rng(s)
            K = random_polytope(MatShape(2, 1), cfg["vertices"], s)
            a = g.uniform(0, np.pi)
            v = np.array([np.cos(a), np.sin(a)])
            SK = steiner_classical(K, v)
            Q2 = _Q_NAMES["simplex"]()
            quad = _quad(cfg, 4)
            q1 = _quad(cfg, 2 * Q1.dim)
            out = [_paired(f"chain-{i:04d}/Q={qname}", _product(K, Q1, p0, q1), _product(SK, Q1, p0, q1), tol,
                           seed=s)]
            out.append(_paired(f"chain-{i:04d}/Q=simplex", petty_product(K, Q2, p0, quad),
                               petty_product(SK, Q2, p0, quad), tol, seed=s))
            return out
        cases.append((f"chain-{i:04d}", chain))

    def sequence():
        s = _seed(cfg, "sequence")
        K = random_polytope(MatShape(2, 1), cfg["vertices"], s)
        _, tr = steiner_sequence(K, rounds=200, seed=s)
        spread = float(np.max(np.abs(tr.area - K.volume())) / K.volume())
        ok = tr.reached is not None and spread <= 1e-9
        return CaseRecord("sequence", float(tr.distance[-1]), tr.threshold * tr.diameter,
                          float(tr.distance[-1]) - tr.threshold * tr.diameter, 0.0, ok, s,
                          {"reached": tr.reached, "area_spread": spread})
    cases.append(("sequence", sequence))
    return ("Steiner symmetrization preserves volume, the fiberwise symmetral does not decrease "
            "volume, and its polar projection body inclusion drives the Petty product upward"), cases


# -- projfind ------------------------------------------------------------------------------

def projfind(cfg):
    from ..projfind import find_projection, geodesic_sphere, smoothed_random_body
    tol = cfg.tolerances
    cases = []

    def check(name, Q, s=None, symmetric=False):
        P = find_projection(Q, tol=tol.certificate)
        M = P.matrix
        idem = float(np.max(np.abs(M @ M - M)))
        tr = abs(float(np.trace(M)) - 1)
        fn = P.extra.get("field_norm", 0.0)
        ok = P.certificate <= tol.certificate and idem <= 1e-10 and tr <= 1e-10
        if symmetric:
            ok = ok and fn <= 1e-8
        return CaseRecord(name, P.certificate, tol.certificate, P.certificate - tol.certificate, 0.0, ok, s,
                          {"projection": P.to_json(), "idempotence": idem, "trace_gap": tr, "field_norm": fn})

    for i in range(cfg["count"]):
        def r2(i=i):
            s = _seed(cfg, "r2", i)
            return check(f"r2-{i:04d}", smoothed_random_body(2, seed=s), s)
        cases.append((f"r2-{i:04d}", r2))
    for i in range(cfg["cases"]):
        def r3(i=i):
            s = _seed(cfg, "r3", i)
            return check(f"r3-{i:04d}", smoothed_random_body(3, seed=s), s)
        cases.append((f"r3-{i:04d}", r3))
    sym = {"square": make_standard("cube", MatShape(1, 2)),
           "hexagon": VertexPolytope(MatShape(1, 2), regular_polygon(6).vertices),
           "cube": make_standard("cube", MatShape(1, 3)),
           "icosahedron": VertexPolytope(MatShape(1, 3), geodesic_sphere(0))}
    for name, Q in sym.items():
        cases.append((f"symmetric-{name}", lambda name=name, Q=Q: check(f"symmetric-{name}", Q, symmetric=True)))
    return ("every convex body Q containing the origin admits a rank-one projection P with Q.P inside Q"), cases


# -- opnorm --------------------------------------------------------------------------------

def _brute_spectral(x):
    from scipy.optimize import minimize_scalar
    t = np.linspace(0, np.pi, 1000, endpoint=False)
    V = np.column_stack([np.cos(t), np.sin(t)])
    vals = np.linalg.norm(V @ x.T, axis=1)
    k = int(np.argmax(vals))
    f = lambda a: -np.linalg.norm(x @ np.array([np.cos(a), np.sin(a)]))
    r = minimize_scalar(f, bounds=(t[k] - np.pi / 1000, t[k] + np.pi / 1000), method="bounded",
                        options={"xatol": 1e-12})
    return max(vals[k], -r.fun)


def opnorm(cfg):
    tol = cfg.tolerances
    n, m = cfg["n"], cfg["m"]
    cases = []
    B = Ball(MatShape(n, 1))
    F = Ball(MatShape(m, 1))

    def probes():
        s = _seed(cfg, "probes")
        X = make_rng(s).standard_normal((cfg["probes"], m, n))
        gb = opnorm_ball(B, F).gauge(X.reshape(len(X), -1))
        bf = np.array([_brute_spectral(x) for x in X]) if n == 2 else np.linalg.norm(X, ord=2, axis=(1, 2))
        err = float(np.max(np.abs(gb - bf) / bf))
        return CaseRecord("spectral-probes", err, 1e-6, err - 1e-6, 0.0, err <= 1e-6, s, {"probes": len(X)})
    cases.append(("spectral-probes", probes))

    N = cfg["samples"]
    ref_s = _seed(cfg, "reference")
    ref = mc_volume(opnorm_ball(B, F), N, ref_s, 1.0)
    volB = unit_ball_volume(n)
    for i in range(cfg["count"]):
        def theorem(i=i):
            s = _seed(cfg, "polygon", i)
            E = bd.centered(random_polytope(MatShape(n, 1), cfg["vertices"], s))
            u, b, _ = E.facets()
            r_in = float(b.min())
            v = mc_volume(opnorm_ball(E, F), N, s, 1.0 / r_in)
            lhs = v.value * E.volume() ** m
            rhs = ref.value * volB ** m
            se = math.hypot(v.stderr * E.volume() ** m, ref.stderr * volB ** m)
            return CaseRecord.inequality(f"theorem-{i:04d}", lhs, rhs, se, tol, rel=0.0, seed=s,
                                         vol_ball=v.value, vol_E=E.volume())
        cases.append((f"theorem-{i:04d}", theorem))

    def p64():
        s = _seed(cfg, "p64")
        K = make_standard("cube", MatShape(2, 1))
        Q = _Q_NAMES["simplex"]()
        X = sphere_quadrature(4, MC, cfg["directions"], seed=s, replicates=1).nodes[0]
        h64 = projection_body(K, Q, 64).support(X)
        hinf = pi_infinity(K, Q).support(X)
        gaps = np.abs(h64 / hinf - 1)
        k = int(np.argmax(gaps))
        return CaseRecord.equality("p64-limit", float(h64[k]), float(hinf[k]), 0.0, tol, rel=2e-2, seed=s,
                                   max_relative_gap=float(gaps[k]), mean_relative_gap=float(gaps.mean()))
    cases.append(("p64-limit", p64))
    return ("vol(operator norm ball B_(E,F)) * vol(E)^m is largest when E is an origin symmetric "
            "ellipsoid"), cases


# -- santalo -------------------------------------------------------------------------------

def _polar_after_santalo(G):
    """vol((G - s(G))^o) for a planar support body, via an outer polygon."""
    P = polytope_from_support(G, sphere_directions(2, 1024))
    z = santalo_point(P)
    return polar_volume_function(P).value(z), z


def santalo(cfg):
    tol = cfg.tolerances
    n = cfg["n"]
    cases = []
    for i in range(cfg["count"]):
        def classical(i=i):
            s = _seed(cfg, "classical", i)
            K = random_polytope(MatShape(2, 1), cfg["vertices"], s)
            K = bd.translate(K, make_rng(s).uniform(-0.3, 0.3, 2))
            z = santalo_point(K)
            prod = K.volume() * polar_volume_function(K).value(z)
            return CaseRecord.inequality(f"classical-{i:04d}", prod, math.pi ** 2, 0.0, tol, seed=s,
                                         santalo_point=z)
        cases.append((f"classical-{i:04d}", classical))

    def disk():
        K = regular_polygon(720)
        z = santalo_point(K)
        prod = K.volume() * polar_volume_function(K).value(z)
        return CaseRecord.equality("classical-disk", prod, math.pi ** 2, 0.0, tol, rel=5e-3)
    cases.append(("classical-disk", disk))

    for qd in cfg["Q"]:
        qname, Q = q_body(qd)
        m = Q.shape.m
        quad = _quad(cfg, n * m)
        rel = tol.discretization if quad.scheme == PRODUCT else None
        for p in cfg["p"]:
            tag = f"Q={qname}/p={p:g}"
            L0 = PolarProjectionBody(projection_body(Ball(MatShape(n, 1)), Q, p))
            wn = unit_ball_volume(n)

            def sides(L, Q=Q, p=p, quad=quad):
                lhs, rhs = [], []
                for r in range(quad.replicates):
                    G = centroid_body(L, Q, p, method="polar", quad=quad, replicate=r)
                    pv, _ = _polar_after_santalo(G)
                    lhs.append(G.source["vol"] ** (1 / m) * pv)
                    G0 = centroid_body(L0, Q, p, method="polar", quad=quad, replicate=r)
                    rhs.append(wn ** 2 * G0.source["vol"] ** (1 / m) / planar_volume(G0))
                return (VolumeEstimate.from_replicates(lhs, quad.scheme),
                        VolumeEstimate.from_replicates(rhs, quad.scheme))

            for i in range(cfg["cases"]):
                def lp(i=i, tag=tag, sides=sides, rel=rel):
                    s = _seed(cfg, "lp", n, m, i)
                    L = random_star(MatShape(n, m), make_rng(s), "ellipsoid" if i % 2 == 0 else "box")
                    a, b = sides(L)
                    return _paired(f"{tag}/random-{i:04d}", a, b, tol, rel=rel, seed=s, body=L.kind)
                cases.append((f"{tag}/random-{i:04d}", lp))

            def eq(tag=tag, sides=sides, L0=L0, rel=rel):
                a, b = sides(L0)
                return _paired(f"{tag}/equality", a, b, tol, rel=rel, equality=True)
            cases.append((f"{tag}/equality", eq))
    return ("vol(L)^(1/m) * vol(polar of the Lp centroid body of L, in Santalo position) is at most "
            "its value for the polar projection body of the ball; classical Santalo for polygons"), cases


# -- sobolev -------------------------------------------------------------------------------

def sobolev(cfg):
    from ..sobolev import (aubin_talenti, extremal_function, from_descriptor, gaussian,
                           radial_quotient_minimum, sharp_d, sobolev_ratio)
    tol = cfg.tolerances
    n = cfg["n"]
    cases = []
    radial = cfg["radial"]
    for p in cfg["p"]:
        def const(p=p):
            a = aubin_talenti(p, n)
            o = radial_quotient_minimum(n, p)
            return CaseRecord.equality(f"p={p:g}/a-vs-radial-oracle", a, o, 0.0, tol, rel=1e-2)
        cases.append((f"p={p:g}/a-vs-radial-oracle", const))

    def dconst():
        v, se = sharp_d(2, 1, Segment(MatShape(1, 1), [-0.5], [0.5]))
        exact = 2 * math.pi * math.sqrt(math.pi / 2)
        return CaseRecord.equality("d-closed-form", v, exact, se, tol, rel=tol.quadrature)
    cases.append(("d-closed-form", dconst))

    for qd in cfg["Q"]:
        qname, Q = q_body(qd)
        m = Q.shape.m
        d = n * m
        if d <= 3:
            quad, sphere, rad = None, None, radial
        else:
            quad = _quad(cfg, d, size=2048)
            sphere, rad = 800, max(32, radial // 2)
        for p in cfg["p"]:
            tag = f"Q={qname}/p={p:g}"
            s = _seed(cfg, "affine", m)
            g = make_rng(s)
            funcs = [("extremal", extremal_function(n, p), "window")]
            if m == 1:
                funcs.append(("extremal-affine", extremal_function(n, p, _random_matrix(g, n),
                                                                   g.uniform(-1, 1, n), 2.0), "window"))
            funcs.append(("gaussian", gaussian(n), "lower"))
            for j, doc in enumerate(cfg.get("functions") or []):
                funcs.append((f"function-{j:02d}", from_descriptor(doc), "lower"))
            for name, f, rule in funcs:
                def run(f=f, name=name, rule=rule, Q=Q, p=p, quad=quad, sphere=sphere, rad=rad, tag=tag):
                    r = sobolev_ratio(f, Q, p, quad, radial=rad, sphere=sphere)
                    if rule == "window":
                        ok = 0.95 <= r.ratio <= 1.07
                        return CaseRecord(f"{tag}/{name}", r.ratio, 1.0, abs(r.ratio - 1), r.stderr, ok, None,
                                          {**r.to_json(), "window": [0.95, 1.07]})
                    info = {k: v for k, v in r.to_json().items() if k not in ("ratio", "stderr")}
                    return CaseRecord.inequality(f"{tag}/{name}", 0.99, r.ratio, r.stderr, tol, rel=0.0, **info)
                cases.append((f"{tag}/{name}", run))
    return ("the affine Sobolev quotient E_p(Q, f) / ||f||_(p*) is at least the sharp Lp Sobolev "
            "constant, with equality for the extremal profiles"), cases


SUITE_BUILDERS = {"petty": petty, "busemann_petty": busemann_petty, "duality": duality,
                  "fixed_point": fixed_point, "steiner": steiner, "projfind": projfind, "opnorm": opnorm,
                  "santalo": santalo, "sobolev": sobolev}
