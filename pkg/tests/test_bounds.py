import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from inscribed_bounds import bounds as B
from inscribed_bounds.bounds import C_TETRA, SQRT3
from inscribed_bounds.domain import face_stats_for, classify_faces
from inscribed_bounds.errors import DegenerateError, DomainError, NoRootError, ValidationError
from inscribed_bounds.spherical import (
    arc_between, isosceles_excess, isosceles_vertices, lhuilier_excess, tau_from_m_alpha,
)

ICO_EDGE = math.atan(2.0)
ICO_VOLUME = 2.5361507101204097
CUBE = 8 / (3 * SQRT3)
TETRA = 8 / (9 * SQRT3)
C_Q = 2 * math.asin(math.sqrt(1 / 3))


# Fejes-Toth face bound

def test_u_general_examples():
    assert B.u_general(math.pi / 2, 3) == pytest.approx(1 / 6, abs=1e-15)
    assert B.u_general(2 * math.pi / 3, 4) == pytest.approx(0.256600, abs=1e-6)
    assert 6 * B.u_general(2 * math.pi / 3, 4) == pytest.approx(CUBE, abs=1e-14)
    assert B.u_general(math.pi, 3) == pytest.approx(2 / (9 * SQRT3), abs=1e-15)


def test_u_triangle_examples():
    assert 20 * B.u_triangle(math.pi / 5) == pytest.approx(ICO_VOLUME, abs=1e-13)
    assert B.u_triangle(math.pi / 5) == pytest.approx(0.126807, abs=1e-6)
    assert B.u_triangle(math.pi / 2) == pytest.approx(1 / 6, abs=1e-15)
    assert 4 * B.u_triangle(math.pi) == pytest.approx(TETRA, abs=1e-15)


def test_u_triangle_reduces_u_general():
    for tau in np.linspace(1e-3, math.pi, 1000):
        assert B.u_triangle(tau) == pytest.approx(B.u_general(tau, 3), abs=1e-13)


@pytest.mark.parametrize("tau", [0.0, -1.0, math.pi + 1e-9])
def test_u_domain(tau):
    with pytest.raises(DomainError):
        B.u_general(tau, 3)
    with pytest.raises(DomainError):
        B.u_triangle(tau)


def test_u_integer_p():
    with pytest.raises(DomainError):
        B.u_general(1.0, 3.5)
    assert B.u_general(1.0, 3.5, allow_real_p=True) > 0
    with pytest.raises(DomainError):
        B.u_general(1.0, 2)


# polyhedral bounds

@pytest.mark.parametrize("fve,expected", [((4, 4, 6), TETRA), ((8, 6, 12), 4 / 3), ((20, 12, 30), ICO_VOLUME)])
def test_polyhedron_bound_equality_cases(fve, expected):
    assert B.polyhedron_bound(*fve) == pytest.approx(expected, abs=1e-13)


def test_polyhedron_bound_euler():
    with pytest.raises(ValidationError):
        B.polyhedron_bound(6, 6, 12)


def test_polyhedron_bound_radius():
    assert B.polyhedron_bound(8, 6, 12, radius=2.0) == pytest.approx(8 * 4 / 3)


@pytest.mark.parametrize("n,expected", [(4, 0.513200), (6, 4 / 3), (12, 2.536151)])
def test_icosahedron_inequality(n, expected):
    assert B.icosahedron_inequality(n) == pytest.approx(expected, abs=1e-6)


def test_icosahedron_inequality_n8():
    assert B.icosahedron_inequality(8) == pytest.approx(1.882641, abs=1e-6)


def test_icosahedron_inequality_errors():
    with pytest.raises(DomainError):
        B.icosahedron_inequality(3)
    with pytest.raises(DomainError):
        B.icosahedron_inequality(12, radius=0)


@given(st.integers(4, 200))
def test_icosahedron_inequality_increasing(n):
    assert B.icosahedron_inequality(n + 1) > B.icosahedron_inequality(n)
    assert B.icosahedron_inequality(n) < 4 * math.pi / 3


# facial bounds in altitude / chord form

def test_v_m_alpha_examples():
    assert B.v_m_alpha(0.0, 1.0) == 0.0
    assert B.v_m_alpha(1 / SQRT3, 2 * math.pi / 3) == pytest.approx(1 / 6, abs=1e-15)
    assert B.v_m_alpha(1.0, 0.7) == 0.0


def test_v_chord_alpha_examples():
    assert B.v_chord_alpha(math.sqrt(2), 2 * math.pi / 3) == pytest.approx(1 / 6, abs=1e-15)
    assert B.v_chord_alpha(math.sqrt(2), math.asin(math.sqrt(2) / 2)) == pytest.approx(0.0, abs=1e-8)
    assert B.v_chord_alpha(math.sqrt(2), math.pi / 2) == pytest.approx(0.117851, abs=1e-6)


def test_v_chord_alpha_negative_radicand():
    with pytest.raises(DomainError):
        B.v_chord_alpha(1.8, 0.3)


@given(st.floats(0.05, 1.95))
def test_chord_alpha_maximizer(chord):
    alpha, vmax = B.chord_alpha_maximizer(chord)
    assert B.v_chord_alpha(chord, alpha) == pytest.approx(vmax, abs=1e-12)
    arc = 2 * math.asin(chord / 2)
    assert vmax == pytest.approx(math.sin(arc) / 6, abs=1e-14)
    for d in (-1e-3, 1e-3):
        a = alpha + d
        if 0 < a < math.pi and math.sin(a) ** 2 >= chord * chord / 4:
            assert B.v_chord_alpha(chord, a) <= vmax + 1e-15


@settings(max_examples=200)
@given(st.floats(0.02, 0.98), st.floats(0.05, math.pi - 0.05))
def test_chord_form_matches_altitude_form(m, alpha):
    A, Bv, C = isosceles_vertices(m, alpha)
    chord = float(np.linalg.norm(A - Bv))
    arc = arc_between(A, Bv)
    # the chord form assumes the acute branch m^2 = 1 - chord^2 / (4 sin^2 alpha) >= 0
    assert B.v_chord_alpha(chord, alpha) == pytest.approx(B.v_m_alpha(m, alpha), abs=1e-12)
    assert B.v_arc_alpha(arc, alpha) == pytest.approx(B.v_m_alpha(m, alpha), abs=1e-12)


# maximal-edge bound

def test_v_tau_chord_examples():
    assert B.v_tau_chord(math.pi / 2, math.sqrt(2), 2 * math.pi / 3) == pytest.approx(1 / 6, abs=1e-15)
    tau = 1.1
    assert B.v_tau_chord(tau, 0.0, 1.0) == pytest.approx(2 / 3 * math.tan(tau / 2), abs=1e-15)
    chord = 2 * math.sin(ICO_EDGE / 2)
    assert B.v_tau_chord(math.pi / 5, chord, 2 * math.pi / 3) == pytest.approx(B.u_triangle(math.pi / 5), abs=1e-10)


def test_v_tau_chord_pole():
    with pytest.raises(DomainError):
        B.v_tau_chord(math.pi, 1.0, 1.0)


def test_v_tau_c_examples():
    assert B.v_tau_c(math.pi / 3, math.pi / 3) == pytest.approx(0.144338, abs=1e-6)
    assert B.v_tau_c(math.pi / 5, ICO_EDGE) == pytest.approx(B.u_triangle(math.pi / 5), abs=1e-14)
    assert B.v_tau_c(math.pi / 3, C_TETRA) == pytest.approx(0.128300, abs=1e-6)
    assert B.v_tau_c(math.pi / 3, C_TETRA) == pytest.approx(2 / 9 * math.sin(math.pi / 6) / (SQRT3 - math.cos(math.pi / 6)), abs=1e-15)


@given(st.floats(0.01, 3.1))
def test_v_tau_c_diagonal(c):
    assert B.v_tau_c(c, c) == pytest.approx(math.sin(c) / 6, abs=1e-14)


def test_v_tau_c_errors():
    with pytest.raises(DomainError):
        B.v_tau_c(0.0, 1.0)
    with pytest.raises(DomainError):
        B.v_tau_c(1.0, math.pi)
    with pytest.raises(DegenerateError):
        B.v_tau_c(1e-9, 1e-9)


@settings(max_examples=300)
@given(st.floats(0.02, 0.98), st.floats(0.05, 2 * math.pi / 3))
def test_v_tau_c_attained_by_isosceles(m, alpha):
    # base AB is the longest side while alpha <= 2pi/3
    A, Bv, C = isosceles_vertices(m, alpha)
    tau = tau_from_m_alpha(m, alpha)
    c = arc_between(A, Bv)
    assert B.v_tau_c(tau, c) == pytest.approx(B.v_m_alpha(m, alpha), abs=1e-12)


def test_v_tau_c_matches_tau_chord_form():
    rng = np.random.default_rng(0)
    for _ in range(500):
        m = rng.uniform(0.05, 0.95)
        alpha = rng.uniform(0.1, 2 * math.pi / 3)
        A, Bv, _ = isosceles_vertices(m, alpha)
        tau = tau_from_m_alpha(m, alpha)
        if tau >= math.pi:
            continue
        chord = float(np.linalg.norm(A - Bv))
        assert B.v_tau_chord(tau, chord, alpha) == pytest.approx(B.v_tau_c(tau, 2 * math.asin(chord / 2)), abs=1e-12)


# equilateral reduction

def test_equilateral_c_examples():
    assert B.equilateral_c_from_tau(math.pi / 2) == pytest.approx(math.pi / 2, abs=1e-14)
    assert B.equilateral_c_from_tau(1e-10) < 1e-4
    assert B.equilateral_c_from_tau(math.pi / 5) == pytest.approx(ICO_EDGE, abs=1e-12)


@given(st.floats(0.01, 2 * math.pi / 3))
def test_equilateral_c_inverts_lhuilier(tau):
    c = B.equilateral_c_from_tau(tau)
    assert lhuilier_excess((c, c, c)) == pytest.approx(tau, abs=1e-12)
    assert isosceles_excess(c, c) == pytest.approx(tau, abs=1e-12)


def test_equilateral_c_domain():
    for tau in (0.0, -1.0, 2 * math.pi):
        with pytest.raises(DomainError):
            B.equilateral_c_from_tau(tau)


def test_equilateral_reduction_to_u_triangle():
    worst = max(abs(B.v_tau_c(t, B.equilateral_c_from_tau(t)) - B.u_triangle(t))
                for t in np.linspace(0.01, math.pi / 2, 500))
    assert worst < 1e-9


# aggregate bounds

def test_uniform_examples():
    assert B.uniform_bound(24, C_Q) == pytest.approx(8 / 3, abs=1e-13)
    assert B.uniform_bound(12, C_TETRA) == pytest.approx(CUBE, abs=1e-13)
    assert B.uniform_bound(24, math.pi / 2) == pytest.approx(4 / SQRT3, abs=1e-13)
    assert B.uniform_bound(24, math.pi / 2) == pytest.approx(2.309401, abs=1e-6)


def test_uniform_rhombic_closed_form():
    c12 = math.cos(math.pi / 12)
    closed = 4 * (math.sqrt(2) * math.cos(math.pi / 6) - c12) / (math.sqrt(2) - c12)
    assert B.uniform_bound(24, math.pi / 2) == pytest.approx(closed, abs=1e-13)


def test_uniform_q_expression():
    c = C_Q
    assert B.uniform_bound(24, c) == pytest.approx(B.uniform_display(24, c), abs=1e-13)


def test_uniform_display_grid():
    for f in (4, 8, 12, 20, 24, 60):
        for c in np.linspace(0.1, 2.5, 40):
            assert B.uniform_bound(f, c) == pytest.approx(B.uniform_display(f, c), abs=1e-13)


def test_theorem1_display_grid():
    for f in (8, 12, 20, 24):
        for fp in range(0, f + 1, max(1, f // 4)):
            for cp in np.linspace(0.3, 1.9, 9):
                for cs in np.linspace(0.9, 1.9, 6):
                    cbar = (fp * cp + (f - fp) * cs) / f
                    assert B.uniform_bound(f, cbar) == pytest.approx(
                        B.theorem1_display(f, fp, cp, cs), abs=1e-13)


def test_theorem1_examples():
    fc = classify_faces([(math.pi / 3, C_TETRA)] * 12)
    assert B.theorem1_bound(fc) == pytest.approx(CUBE, abs=1e-12)
    fc = classify_faces([(math.pi / 6, math.pi / 2)] * 24)
    assert B.theorem1_bound(fc) == pytest.approx(4 / SQRT3, abs=1e-12)
    fc = classify_faces([(math.pi / 5, ICO_EDGE)] * 20)
    assert B.theorem1_bound(fc) == pytest.approx(ICO_VOLUME, abs=1e-12)


def test_theorem1_mixed_faces_uses_boundary_values():
    faces = [(0.5, 1.0)] * 6 + [(0.5, 1.88)] * 2
    fc = classify_faces(faces)
    assert fc.f_prime == 6 and fc.f == 8
    s = face_stats_for(0.5, 1.88)
    assert fc.c_star == pytest.approx(s.f_tau)
    assert fc.c_prime == pytest.approx(1.0)
    assert fc.tau_prime == pytest.approx(1.0)
    assert B.theorem1_bound(fc) == pytest.approx(B.uniform_bound(8, (6 * 1.0 + 2 * s.f_tau) / 8))


def test_face_classification_consistency():
    s = face_stats_for(0.5, 1.88)
    with pytest.raises(ValidationError):
        B.FaceClassification((s,), ())
    with pytest.raises(ValidationError):
        B.FaceClassification((), (B.FaceStats(0.5, 1.88, B.Region.DPRIME, None),))


def test_theorem1_rejects_large_faces():
    fc = B.FaceClassification((B.FaceStats(1.6, 1.7, B.Region.D),) * 8, ())
    with pytest.raises(ValidationError):
        B.theorem1_bound(fc)


# the two-tetrahedra assembly

def test_theorem2_term_matches_v_tau_c():
    for tau in np.linspace(1e-3, math.pi, 1000):
        assert B.theorem2_term(tau) == pytest.approx(B.v_tau_c(tau, C_TETRA), abs=1e-12)


def test_theorem2_term_examples():
    assert B.theorem2_term(math.pi / 3) == pytest.approx(0.128300, abs=1e-6)
    assert B.theorem2_term(0.0) == 0.0
    assert 9 / 2 * 5 * B.theorem2_term(math.pi / 5) == pytest.approx(1.9783562941988446, abs=1e-13)


def test_theorem2_first_term_value():
    # the first assembled term is 2/(9 sqrt 3), not 1/9
    assert B.v_tau_c(math.pi, C_TETRA) == pytest.approx(2 / (9 * SQRT3), abs=1e-15)


def test_theorem2_assemble():
    total = B.theorem2_assemble([math.pi / 5] * 5)
    assert total == pytest.approx(2 / (9 * SQRT3) + 4 / (3 * SQRT3) + 2 / 9 * 1.9783562941988446, abs=1e-12)
    assert total < CUBE


def test_theorem2_assemble_errors():
    with pytest.raises(ValidationError):
        B.theorem2_assemble([math.pi / 4] * 4)
    with pytest.raises(ValidationError):
        B.theorem2_assemble([math.pi / 5] * 4 + [math.pi / 5 + 1e-6])
    with pytest.raises(ValidationError):
        B.theorem2_assemble([-0.1, 0.1 + math.pi / 2, math.pi / 2, 0.0, 0.0])


# p-gon forms

def test_pgon_reduces_to_triangle():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        m = rng.uniform(0.01, 0.99)
        alpha = rng.uniform(0.05, math.pi - 0.05)
        assert B.v_pgon_m_alpha(m, alpha, 3) == pytest.approx(B.v_m_alpha(m, alpha), abs=1e-12)
        assert B.pgon_tau(m, alpha, 3) == pytest.approx(tau_from_m_alpha(m, alpha, check=False), abs=1e-12)
        chord = 2 * math.sqrt(1 - m * m) * math.sin(alpha)
        if 1e-6 < chord < 2 and math.sin(alpha) ** 2 >= chord ** 2 / 4:
            assert B.v_pgon_chord_alpha(chord, alpha, 3) == pytest.approx(B.v_chord_alpha(chord, alpha), abs=1e-12)
            arc = 2 * math.asin(chord / 2)
            assert B.v_pgon_arc_alpha(arc, alpha, 3) == pytest.approx(B.v_arc_alpha(arc, alpha), abs=1e-12)


def test_pgon_cube_face():
    assert B.v_pgon_m_alpha(1 / SQRT3, 3 * math.pi / 4, 4) == pytest.approx(CUBE / 6, abs=1e-14)
    assert B.pgon_tau(1 / SQRT3, 3 * math.pi / 4, 4) == pytest.approx(2 * math.pi / 3, abs=1e-14)


def test_pgon_chord_small():
    assert B.v_pgon_chord_alpha(1e-6, 1.0, 5) < 1e-11


def test_pgon_tau_bound_examples():
    assert B.pgon_tau_bound(math.pi / 5, 2 * math.pi / 3, 3) == pytest.approx(0.126807, abs=1e-6)
    assert B.pgon_tau_bound(math.pi / 5, 2 * math.pi / 3, 3) == pytest.approx(B.u_triangle(math.pi / 5), abs=1e-9)
    assert B.pgon_tau_bound(2 * math.pi / 3, 3 * math.pi / 4, 4) == pytest.approx(0.256600, abs=1e-6)
    assert B.pgon_tau_bound(2 * math.pi / 3, 3 * math.pi / 4, 4) == pytest.approx(B.u_general(2 * math.pi / 3, 4), abs=1e-9)
    assert B.pgon_tau_bound(1e-6, 2.0, 4) < 1e-5


def test_pgon_tau_bound_matches_v_tau_c():
    rng = np.random.default_rng(2)
    for _ in range(60):
        m = rng.uniform(0.05, 0.95)
        alpha = rng.uniform(0.2, 2 * math.pi / 3)
        tau = tau_from_m_alpha(m, alpha)
        roots = B.pgon_altitudes(tau, alpha, 3)
        assert min(abs(r - m) for r in roots) < 1e-9
        A, Bv, _ = isosceles_vertices(m, alpha)
        assert B.v_pgon_m_alpha(m, alpha, 3) == pytest.approx(B.v_tau_c(tau, arc_between(A, Bv)), abs=1e-9)


def test_pgon_tau_bound_no_root():
    with pytest.raises(NoRootError):
        B.pgon_tau_bound(3.0, 0.3, 4)
    with pytest.raises(DomainError):
        B.pgon_tau_bound(0.0, 1.0, 4)
