import math

import numpy as np
import pytest
import torch
from pydantic import ValidationError
from scipy import stats

from sde.model import VpSdeSchedule
from sde.vp_sde import (
    beta_at,
    marginal_coeffs,
    pair_mask,
    perturb,
    prior_sample,
    quantize,
    reverse_drift,
    score_target,
    symmetric_noise,
)
from utils.errors import ContractViolationError, DomainError, ScoreSingularityError

from conftest import lower_entries

f64 = torch.float64


def _t(value: float) -> torch.Tensor:
    return torch.tensor(value, dtype=f64)


def _random_signed(batch: int, n: int, seed: int = 0) -> torch.Tensor:
    gen = torch.Generator().manual_seed(seed)
    upper = torch.triu((torch.rand(batch, n, n, generator=gen, dtype=f64) < 0.5).to(f64), diagonal=1)
    A = 2.0 * (upper + upper.transpose(-1, -2)) - 1.0
    A.diagonal(dim1=-2, dim2=-1).zero_()
    return A


def test_schedule_rejects_inverted_betas():
    with pytest.raises(ValidationError):
        VpSdeSchedule(beta_min=5.0, beta_max=1.0)


@pytest.mark.parametrize(("t", "expected"), [(0.0, 0.1), (1.0, 20.0), (0.5, 10.05)])
def test_beta_at(sched, t, expected):
    assert beta_at(sched, _t(t)).item() == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("t", [-0.1, 1.5])
def test_time_outside_unit_interval_is_domain_error(sched, t):
    with pytest.raises(DomainError):
        beta_at(sched, t)
    with pytest.raises(ValueError):
        marginal_coeffs(sched, t)


def test_marginal_coeffs_endpoints(sched):
    alpha, sigma = marginal_coeffs(sched, _t(0.0))
    assert alpha.item() == 1.0
    assert sigma.item() == 0.0

    alpha, sigma = marginal_coeffs(sched, _t(1.0))
    assert alpha.item() == pytest.approx(math.exp(-5.025), rel=1e-12)
    assert sigma.item() == pytest.approx(math.sqrt(1.0 - math.exp(-10.05)), rel=1e-12)


def test_marginal_coeffs_midpoint_matches_quadrature(sched):
    grid = np.linspace(0.0, 0.5, 200_001)
    integral = np.trapezoid(0.1 + grid * 19.9, grid)
    alpha, _ = marginal_coeffs(sched, _t(0.5))
    assert alpha.item() == pytest.approx(math.exp(-0.5 * integral), rel=1e-9)
    assert alpha.item() == pytest.approx(math.exp(-1.26875), rel=1e-12)


def test_variance_is_preserved(sched):
    t = torch.rand(1000, generator=torch.Generator().manual_seed(0), dtype=f64)
    alpha, sigma = marginal_coeffs(sched, t)
    assert torch.allclose(alpha**2 + sigma**2, torch.ones_like(t), atol=1e-12, rtol=0)

    alpha_sorted, _ = marginal_coeffs(sched, torch.sort(t).values)
    assert torch.all(alpha_sorted[1:] <= alpha_sorted[:-1])


def test_symmetric_noise_shape_symmetry_and_mask(generator):
    node_mask = torch.tensor([[True, True, True, False]])
    z = symmetric_noise((1, 4, 4), generator, node_mask, dtype=f64)
    assert torch.equal(z, z.transpose(-1, -2))
    assert torch.all(z.diagonal(dim1=-2, dim2=-1) == 0)
    assert torch.all(z[0, 3] == 0) and torch.all(z[0, :, 3] == 0)


def test_perturb_zero_noise_scales_by_alpha(sched):
    A0 = _random_signed(2, 6)
    state = perturb(A0, _t(0.3), torch.zeros_like(A0), sched)
    alpha, _ = marginal_coeffs(sched, _t(0.3))
    assert torch.allclose(state.A, alpha * A0)


def test_perturb_at_time_zero_is_identity(sched, generator):
    A0 = _random_signed(2, 6)
    noise = symmetric_noise(A0.shape, generator, dtype=f64)
    state = perturb(A0, _t(0.0), noise, sched)
    assert torch.equal(state.A, A0)
    assert torch.equal(state.A_bar, (A0 > 0).to(f64))


def test_perturb_rejects_asymmetric_input(sched):
    A0 = _random_signed(1, 4)
    A0[0, 0, 1] = -A0[0, 1, 0]
    with pytest.raises(ContractViolationError):
        perturb(A0, _t(0.5), torch.zeros_like(A0), sched)


def test_perturb_keeps_masked_pairs(sched, generator):
    A0 = _random_signed(1, 5)
    node_mask = torch.tensor([[True, True, True, False, False]])
    noise = symmetric_noise(A0.shape, generator, dtype=f64)
    state = perturb(A0, _t(0.7), noise, sched, node_mask)
    outside = ~pair_mask(node_mask)
    off_diagonal = ~torch.eye(5, dtype=torch.bool)
    assert torch.equal(state.A[outside & off_diagonal], A0[outside & off_diagonal])
    assert torch.equal(state.A, state.A.transpose(-1, -2))
    assert state.A_bar[0, 3:].sum() == 0


def test_perturb_empirical_moments(sched, generator):
    A0 = torch.ones(1600, 12, 12, dtype=f64)
    A0.diagonal(dim1=-2, dim2=-1).zero_()
    noise = symmetric_noise(A0.shape, generator, dtype=f64)
    state = perturb(A0, _t(0.5), noise, sched)
    alpha, sigma = marginal_coeffs(sched, _t(0.5))

    entries = lower_entries(state.A)
    assert entries.numel() > 100_000
    standard_error = sigma.item() / math.sqrt(entries.numel())
    assert abs(entries.mean().item() - alpha.item()) < 4 * standard_error
    assert entries.std().item() == pytest.approx(sigma.item(), rel=0.01)


def test_equilibrium_at_terminal_time(sched, generator):
    A0 = _random_signed(1600, 12, seed=3)
    noise = symmetric_noise(A0.shape, generator, dtype=f64)
    state = perturb(A0, _t(1.0), noise, sched)

    entries = lower_entries(state.A).numpy()
    assert stats.kstest(entries, "norm").pvalue > 0.01
    edge_frequency = lower_entries(state.A_bar).mean().item()
    assert 0.49 <= edge_frequency <= 0.51


def test_score_target_equals_scaled_noise(sched, generator):
    A0 = _random_signed(3, 7)
    noise = symmetric_noise(A0.shape, generator, dtype=f64)
    t = torch.tensor([0.1, 0.5, 0.9], dtype=f64)
    state = perturb(A0, t, noise, sched)
    _, sigma = marginal_coeffs(sched, t)
    target = score_target(state.A, A0, t, sched)
    assert torch.allclose(target, -noise / sigma.reshape(-1, 1, 1), atol=1e-10)
    assert torch.equal(target, target.transpose(-1, -2))


def test_score_target_vanishes_at_the_mean(sched):
    A0 = _random_signed(1, 5)
    alpha, _ = marginal_coeffs(sched, _t(0.4))
    assert torch.all(score_target(alpha * A0, A0, _t(0.4), sched) == 0)


def test_score_target_at_time_zero_is_singular(sched):
    A0 = _random_signed(1, 4)
    with pytest.raises(ScoreSingularityError):
        score_target(A0, A0, _t(0.0), sched)


def test_score_target_matches_finite_differences(sched):
    t = _t(0.35)
    alpha, sigma = (value.item() for value in marginal_coeffs(sched, t))
    a0, a = 1.0, 0.37

    def log_density(x: float) -> float:
        return -((x - alpha * a0) ** 2) / (2 * sigma**2) - math.log(sigma * math.sqrt(2 * math.pi))

    h = 1e-5
    numeric = (log_density(a + h) - log_density(a - h)) / (2 * h)
    A_t = torch.tensor([[0.0, a], [a, 0.0]], dtype=f64)
    A0 = torch.tensor([[0.0, a0], [a0, 0.0]], dtype=f64)
    analytic = score_target(A_t, A0, t, sched)[0, 1].item()
    assert analytic == pytest.approx(numeric, rel=1e-5)


def test_quantize_extremes():
    full = torch.ones(4, 4)
    empty = -torch.ones(4, 4)
    assert torch.equal(quantize(full), 1.0 - torch.eye(4))
    assert torch.equal(quantize(empty), torch.zeros(4, 4))


def test_quantize_respects_node_mask():
    A = torch.ones(1, 4, 4)
    node_mask = torch.tensor([[True, True, False, False]])
    A_bar = quantize(A, node_mask)
    assert A_bar.sum() == 2
    assert A_bar[0, 0, 1] == 1


def test_quantize_flip_rate_at_small_time(sched, generator):
    t = _t(0.19)
    alpha, sigma = marginal_coeffs(sched, t)
    A0 = _random_signed(400, 12, seed=5)
    noise = symmetric_noise(A0.shape, generator, dtype=f64)
    state = perturb(A0, t, noise, sched)

    flips = lower_entries((state.A_bar != (A0 > 0).to(f64)).to(f64))
    expected = torch.special.ndtr(-alpha / sigma).item()
    standard_error = math.sqrt(expected * (1 - expected) / flips.numel())
    assert abs(flips.mean().item() - expected) < 4 * standard_error


def test_reverse_drift_values_and_linearity(sched):
    zeros = torch.zeros(1, 3, 3, dtype=f64)
    assert torch.all(reverse_drift(zeros, zeros, _t(0.5), sched) == 0)

    A = torch.full((1, 2, 2), 0.4, dtype=f64)
    S = torch.full((1, 2, 2), -1.5, dtype=f64)
    beta = 10.05
    assert reverse_drift(A, S, _t(0.5), sched)[0, 0, 1].item() == pytest.approx(-0.5 * beta * 0.4 + beta * 1.5)
    assert torch.allclose(reverse_drift(3.0 * A, 3.0 * S, _t(0.5), sched), 3.0 * reverse_drift(A, S, _t(0.5), sched))


def test_prior_sample_is_masked_and_symmetric(generator):
    node_mask = torch.tensor([[True] * 5 + [False] * 2])
    A = prior_sample(node_mask, generator, dtype=f64)
    assert A.shape == (1, 7, 7)
    assert torch.equal(A, A.transpose(-1, -2))
    assert torch.all(A[0, 5:] == 0)
