//! Built-in reference systems used by the demo subcommands and the test
//! suites: an eight-window tight frame on Λ = {0, 1/2} + 2ℤ with
//! S = 2, M = 2, and the small perturbation of it that stays a frame.

use num_complex::Complex64;

use crate::gabor::GaborSpec;
use crate::lambda::{LambdaParams, LambdaPoint};
use crate::sequences::NuSequence;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn window(
    params: LambdaParams,
    a: LambdaPoint,
    va: [f64; 2],
    b: LambdaPoint,
    vb: [f64; 2],
) -> NuSequence {
    NuSequence::from_entries(
        params,
        2,
        [
            (a, vec![re(va[0]), re(va[1])]),
            (b, vec![re(vb[0]), re(vb[1])]),
        ],
    )
    .expect("two-point windows are consistent")
}

/// N = 2, r = 1, S = 2, M = 2, P = 7. Four ± window pairs supported on
/// {0, 4} and four on {1/2, 9/2}; a tight frame with bound 4 whose
/// translate matrices satisfy M_{m,k}M*_{m,k'} = 16δ_{kk'}I₈.
pub fn tight_frame_spec() -> GaborSpec {
    let params = LambdaParams::new(2, 1).expect("(2, 1) is admissible");
    let even0 = LambdaPoint::new(0, false); // λ = 0
    let even4 = LambdaPoint::new(2, false); // λ = 4
    let odd0 = LambdaPoint::new(0, true); // λ = 1/2
    let odd4 = LambdaPoint::new(2, true); // λ = 9/2
    let windows = vec![
        window(params, even0, [1.0, 0.0], even4, [1.0, 0.0]),
        window(params, even0, [1.0, 0.0], even4, [-1.0, 0.0]),
        window(params, even0, [0.0, 1.0], even4, [0.0, 1.0]),
        window(params, even0, [0.0, 1.0], even4, [0.0, -1.0]),
        window(params, odd0, [1.0, 0.0], odd4, [1.0, 0.0]),
        window(params, odd0, [1.0, 0.0], odd4, [-1.0, 0.0]),
        window(params, odd0, [0.0, 1.0], odd4, [0.0, 1.0]),
        window(params, odd0, [0.0, 1.0], odd4, [0.0, -1.0]),
    ];
    GaborSpec::new(params, 2, windows).expect("reference windows are consistent")
}

/// Perturbations V_j of [`tight_frame_spec`]: the sums W_j + V_j have
/// transforms of sup norm exactly 1/17 (j ≤ 3) or zero (j ≥ 4), so the
/// smallness condition 2⁹·(1/17)²·2 < 4 certifies the perturbed frame.
pub fn perturbing_windows() -> Vec<NuSequence> {
    let params = LambdaParams::new(2, 1).expect("(2, 1) is admissible");
    let even0 = LambdaPoint::new(0, false);
    let even4 = LambdaPoint::new(2, false);
    let odd0 = LambdaPoint::new(0, true);
    let odd4 = LambdaPoint::new(2, true);
    let q = -16.0 / 17.0;
    vec![
        window(params, even0, [q, 0.0], even4, [-1.0, 0.0]),
        window(params, even0, [q, 0.0], even4, [1.0, 0.0]),
        window(params, even0, [0.0, q], even4, [0.0, -1.0]),
        window(params, even0, [0.0, q], even4, [0.0, 1.0]),
        window(params, odd0, [-1.0, 0.0], odd4, [-1.0, 0.0]),
        window(params, odd0, [-1.0, 0.0], odd4, [1.0, 0.0]),
        window(params, odd0, [0.0, -1.0], odd4, [0.0, -1.0]),
        window(params, odd0, [0.0, -1.0], odd4, [0.0, 1.0]),
    ]
}

/// The system generated by [`perturbing_windows`] on its own.
pub fn perturbed_spec() -> GaborSpec {
    let params = LambdaParams::new(2, 1).expect("(2, 1) is admissible");
    GaborSpec::new(params, 2, perturbing_windows()).expect("perturbing windows are consistent")
}
