//! Small named examples used across the crate, its tests and the CLI.

use crate::brace::FiniteBrace;
use crate::permgrp::Permutation;
use crate::solution::{validate_solution, Solution};

/// Two points, `λ_0 = λ_1 = (0 1)`.
pub fn swap2() -> Solution {
    validate_solution(vec![vec![1, 0], vec![1, 0]], None).expect("SWAP2 is a solution")
}

/// Order-4 brace on (ℤ/2)² with `λ_v = τ^{v₀+v₁}`, τ swapping the coordinates.
///
/// Elements in lexicographic order: (0,0), (0,1), (1,0), (1,1).
pub fn b4() -> FiniteBrace {
    let id = Permutation::identity(2);
    let tau = Permutation::from_cycles(2, &[&[0, 1]]).unwrap();
    FiniteBrace::from_vector(2, 2, vec![id.clone(), tau.clone(), tau, id]).expect("B4 tables")
}

/// Associated solution of [`b4`]: λ rows `[id, τ, τ, id]` with τ = (1 2).
pub fn sol4() -> Solution {
    let id = vec![0, 1, 2, 3];
    let tau = vec![0, 2, 1, 3];
    validate_solution(vec![id.clone(), tau.clone(), tau, id], None).expect("SOL4 is a solution")
}
