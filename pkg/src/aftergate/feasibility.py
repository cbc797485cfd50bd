"""Gating-frequency feasibility classification.

A frequency is usable when two conditions hold at once: legitimate operation
must not poison itself with delayed detection (gates far enough apart that a
click rarely spills into the next gate), yet an attacker's trailing-edge
pulses must still spill enough to push the corrected QBER over the security
threshold. Frequencies failing the first are Noisy, failing the second are
Vulnerable, and the window in between is Suitable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .attack import QBER_THRESHOLD, _qber_array
from .detector import (DetectorParams, Environment, GateTiming, PulseSpec,
                       click_probability, trap_lifetime, trap_loading,
                       click_probability_array,
                       delayed_click_probability_arrays)


@dataclass(frozen=True)
class FrequencyVerdict:
    frequency: float  # Hz
    q_noise: float
    q_attack: float
    classification: str  # "Noisy" | "Suitable" | "Vulnerable"


def classify(q_noise: float, q_attack: float,
             threshold: float = QBER_THRESHOLD) -> str:
    """Pure trichotomy on the two QBER figures."""
    if q_noise > threshold:
        return "Noisy"
    if q_attack <= threshold:
        return "Vulnerable"
    return "Suitable"


def rescale_detector(det: DetectorParams, frequency: float) -> DetectorParams:
    """Detector at a different clock, keeping the duty cycle constant.

    The gate width scales with the period, so the fraction-parameterized
    profiles keep their shape relative to the gate.
    """
    duty = det.timing.gate_width / det.timing.gate_period
    timing = GateTiming(gating_frequency=frequency,
                        gate_width=duty * 1.0e12 / frequency)
    return replace(det, timing=timing)


def noise_qber(det: DetectorParams, env: Environment,
               signal_flux: float = 0.1) -> float:
    """QBER induced by the detector's own delayed detection, no eavesdropper.

    Each legitimate detection at the optimal delay seeds interface-trap
    carriers; their release in the following gate is an error half the time
    (they are uncorrelated with the transmitted qubit), as is the dark and
    afterpulse background. Only the interface species is counted, which is
    the conservative choice for this criterion.
    """
    if signal_flux <= 0:
        raise ValueError("signal_flux must be > 0")
    pulse = PulseSpec(mean_flux=signal_flux, delay=0.0)
    p_sig = click_probability(det, pulse)
    state = trap_loading(det, pulse)
    period = det.timing.gate_period
    width = det.timing.gate_width
    tau = trap_lifetime(det.interface_trap, env)
    mean = (state.interface_population
            * (math.exp(-period / tau) - math.exp(-(period + width) / tau))
            * det.trigger_peak)
    p_dd = 1.0 - math.exp(-mean)
    p_other = det.dark_count_prob + (det.afterpulse_prob * p_sig
                                     / det.afterpulse_spread_gates)
    total = p_sig + p_dd + p_other
    if total <= 0.0:
        raise ValueError("zero total detection probability")
    return (0.5 * p_dd + 0.5 * p_other) / total


def attack_qber_at_frequency(det: DetectorParams, env: Environment,
                             attack_flux: float = 20.0,
                             delay_points: int = 512) -> float:
    """Best corrected QBER an attacker can reach at this clock rate.

    Minimizes the delayed-detection QBER over the pulse delay (the attacker
    picks the most favorable delay) at the conservative attack flux.
    """
    if attack_flux <= 0:
        raise ValueError("attack_flux must be > 0")
    width = det.timing.gate_width
    period = det.timing.gate_period
    delays = np.linspace(0.0, min(1.05 * width, 0.999 * period), delay_points)
    p_f = click_probability_array(det, attack_flux, delays)
    p_h = click_probability_array(det, attack_flux / 2.0, delays)
    p_ddf = delayed_click_probability_arrays(det, attack_flux, delays, env)
    p_ddh = delayed_click_probability_arrays(det, attack_flux / 2.0, delays, env)
    p_bar = 0.25 * p_ddf + 0.5 * p_ddh
    q = _qber_array(np.minimum(p_f + p_bar, 1.0), np.minimum(p_h + p_bar, 1.0))
    if np.all(np.isnan(q)):
        raise ValueError("attack sweep produced no signal at any delay; "
                         "check the detector configuration")
    return float(np.nanmin(q))


def feasibility_band(frequencies, env: Environment,
                     det_template: DetectorParams,
                     signal_flux: float = 0.1,
                     attack_flux: float = 20.0,
                     threshold: float = QBER_THRESHOLD) -> list[FrequencyVerdict]:
    """One verdict per frequency, ascending grid."""
    freqs = np.asarray(frequencies, dtype=float)
    if np.any(np.diff(freqs) <= 0):
        raise ValueError("frequency grid must be sorted ascending")
    out = []
    for f in freqs:
        det = rescale_detector(det_template, f)
        qn = noise_qber(det, env, signal_flux)
        qa = attack_qber_at_frequency(det, env, attack_flux)
        out.append(FrequencyVerdict(frequency=float(f), q_noise=qn,
                                    q_attack=qa,
                                    classification=classify(qn, qa, threshold)))
    return out


def suitable_interval(verdicts: list[FrequencyVerdict]) -> tuple[float, float] | None:
    """(min_hz, max_hz) of the Suitable grid points, or None if empty."""
    fs = [v.frequency for v in verdicts if v.classification == "Suitable"]
    if not fs:
        return None
    return (min(fs), max(fs))
