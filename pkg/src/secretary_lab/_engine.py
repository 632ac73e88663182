"""Vectorized batch engines for the single-select algorithms.

Each engine reproduces its per-trial reference implementation decision for
decision: same comparison forms, same operand order, same IEEE operations,
with the per-arrival loop traded for whole-cell array ops. The per-trial
implementations in single_select remain the source of truth; tests enforce
index-for-index agreement on random cells.

Inputs are (trials, n) matrices of true values U, predictions UH, and arrival
times T (distinct within each row). Outputs are per-trial arrays
(accepted index or -1, accepted value or 0.0, acceptance time or nan).
"""

from __future__ import annotations

import numpy as np

from .single_select import (
    CLASSIC_CUTOFF,
    ERROR_SWITCH_THRESHOLD,
    LEARNED_REJECT_END,
    value_max_phase_times,
)

__all__ = ["run_single_batch", "BATCH_ALGORITHMS", "error_matrix"]


def error_matrix(kind: str, U: np.ndarray, UH: np.ndarray) -> np.ndarray:
    if kind == "additive":
        return np.abs(UH - U)
    if kind == "multiplicative":
        return np.abs(1.0 - UH / U)
    if kind == "symmetric":
        return np.abs(1.0 - np.maximum(U, UH) / np.minimum(U, UH))
    raise ValueError(f"unknown error kind {kind!r}")


def _ordered(U, UH, T):
    order = np.argsort(T, axis=1)
    return (
        order,
        np.take_along_axis(U, order, 1),
        np.take_along_axis(UH, order, 1),
        np.take_along_axis(T, order, 1),
    )


def _records(U_ord):
    # first arrival is a record; later ones must beat the strict prefix max
    rec = np.empty(U_ord.shape, dtype=bool)
    rec[:, 0] = True
    run = np.maximum.accumulate(U_ord, axis=1)
    rec[:, 1:] = U_ord[:, 1:] > run[:, :-1]
    return rec


def _first_true(mask):
    return mask.any(axis=1), mask.argmax(axis=1)


def _gather(order, U_ord, T_ord, accept_pos, accepted):
    rows = np.arange(order.shape[0])
    pos = np.where(accepted, accept_pos, 0)
    idx = np.where(accepted, order[rows, pos], -1)
    val = np.where(accepted, U_ord[rows, pos], 0.0)
    time = np.where(accepted, T_ord[rows, pos], np.nan)
    return idx.astype(np.int64), val, time


def _pegging_batch(U, UH, T, error_kind):
    trials, n = U.shape
    order, U_ord, UH_ord, T_ord = _ordered(U, UH, T)
    rows = np.arange(trials)
    pos_idx = np.arange(n)[None, :]
    E_ord = np.maximum.accumulate(
        np.take_along_axis(error_matrix(error_kind, U, UH), order, 1), axis=1
    )
    rec = _records(U_ord)
    i_hat = UH.argmax(axis=1)
    p_hat = (order == i_hat[:, None]).argmax(axis=1)
    best_pred = UH[rows, i_hat]
    best_pred_value = U[rows, i_hat]
    condF = rec & (T_ord > 0.5)
    if error_kind == "additive":
        outsider = condF & (U_ord > best_pred[:, None] - E_ord)
    else:
        outsider = condF & (U_ord * (1.0 + E_ord) > best_pred[:, None])
    E_at_hat = E_ord[rows, p_hat]
    after_hat = pos_idx > p_hat[:, None]
    if error_kind == "additive":
        peg = after_hat & (best_pred_value[:, None] < UH_ord + E_at_hat[:, None])
    else:
        peg = after_hat & (
            best_pred_value[:, None] * (1.0 - E_at_hat[:, None]) < UH_ord
        )
    any_peg = peg.any(axis=1)
    last_peg = np.where(any_peg, n - 1 - peg[:, ::-1].argmax(axis=1), -1)
    pre_any, pre_pos = _first_true(outsider & (pos_idx < p_hat[:, None]))
    post_any, post_pos = _first_true(
        after_hat & (outsider | (pos_idx == last_peg[:, None]))
    )
    hat_accepts = condF[rows, p_hat] | ~any_peg
    accept_pos = np.where(pre_any, pre_pos, np.where(hat_accepts, p_hat, post_pos))
    return _gather(order, U_ord, T_ord, accept_pos, np.ones(trials, dtype=bool))


def _dynkin_batch(U, UH, T, cutoff):
    order, U_ord, _, T_ord = _ordered(U, UH, T)
    accepted, pos = _first_true(_records(U_ord) & (T_ord > cutoff))
    return _gather(order, U_ord, T_ord, pos, accepted)


def _learned_dynkin_batch(U, UH, T):
    trials, n = U.shape
    order, U_ord, UH_ord, T_ord = _ordered(U, UH, T)
    pos_idx = np.arange(n)[None, :]
    err_ord = np.take_along_axis(np.abs(1.0 - UH / U), order, 1)
    has_switch, switch_pos = _first_true(err_ord > ERROR_SWITCH_THRESHOLD)
    switch_pos = np.where(has_switch, switch_pos, n)
    i_hat = UH.argmax(axis=1)
    p_hat = (order == i_hat[:, None]).argmax(axis=1)
    trusted = p_hat < switch_pos
    fallback = (
        _records(U_ord)
        & (T_ord > LEARNED_REJECT_END)
        & (pos_idx >= switch_pos[:, None])
    )
    has_fb, fb_pos = _first_true(fallback)
    accepted = trusted | has_fb
    accept_pos = np.where(trusted, p_hat, fb_pos)
    return _gather(order, U_ord, T_ord, accept_pos, accepted)


def _highest_prediction_batch(U, UH, T):
    trials = U.shape[0]
    rows = np.arange(trials)
    i_hat = UH.argmax(axis=1)
    return (
        i_hat.astype(np.int64),
        U[rows, i_hat],
        T[rows, i_hat],
    )


def _value_max_batch(U, UH, T, c, lam):
    if lam < 0.0:
        raise ValueError(f"lam must be >= 0, got {lam!r}")
    t_lo, t_hi = value_max_phase_times(c)
    order, U_ord, _, T_ord = _ordered(U, UH, T)
    target = UH.max(axis=1)
    before_lo = np.where(T_ord < t_lo, U_ord, -np.inf).max(axis=1)
    before_hi = np.where(T_ord < t_hi, U_ord, -np.inf).max(axis=1)
    middle_bar = np.maximum(before_lo, target - lam)
    middle = (T_ord > t_lo) & (T_ord < t_hi) & (U_ord > middle_bar[:, None])
    late = (T_ord >= t_hi) & (U_ord > before_hi[:, None])
    accepted, pos = _first_true(middle | late)
    return _gather(order, U_ord, T_ord, pos, accepted)


BATCH_ALGORITHMS = {
    "additive-pegging": lambda U, UH, T, p: _pegging_batch(U, UH, T, "additive"),
    "multiplicative-pegging": lambda U, UH, T, p: _pegging_batch(
        U, UH, T, "multiplicative"
    ),
    "pegging-symmetric": lambda U, UH, T, p: _pegging_batch(U, UH, T, "symmetric"),
    "dynkin": lambda U, UH, T, p: _dynkin_batch(
        U, UH, T, p.get("cutoff", CLASSIC_CUTOFF)
    ),
    "learned-dynkin": lambda U, UH, T, p: _learned_dynkin_batch(U, UH, T),
    "highest-prediction": lambda U, UH, T, p: _highest_prediction_batch(U, UH, T),
    "value-max": lambda U, UH, T, p: _value_max_batch(
        U, UH, T, p.get("c", 1.0), p.get("lam", 0.0)
    ),
}


def run_single_batch(name: str, params, U, UH, T):
    """Dispatch a whole cell of trials to one algorithm's batch engine."""
    try:
        engine = BATCH_ALGORITHMS[name]
    except KeyError:
        raise KeyError(f"no batch engine for algorithm {name!r}") from None
    return engine(U, UH, T, dict(params or {}))
