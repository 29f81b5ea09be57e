//! Unit phases e^{2πiθ} from exact rational angles.

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;

/// e^{2πiθ} with θ reduced mod 1 exactly before trig evaluation, so the
/// accuracy does not degrade for large numerators. Quarter turns come
/// out bit-exact (±1, ±i).
pub fn unit_phase(theta: Rational64) -> Complex64 {
    let frac = theta - theta.floor();
    debug_assert!(*frac.numer() >= 0);
    if *frac.denom() == 1 {
        return Complex64::new(1.0, 0.0);
    }
    if *frac.denom() == 2 {
        return Complex64::new(-1.0, 0.0);
    }
    if *frac.denom() == 4 {
        return if *frac.numer() == 1 {
            Complex64::new(0.0, 1.0)
        } else {
            Complex64::new(0.0, -1.0)
        };
    }
    let x = frac.to_f64().expect("reduced fraction fits in f64");
    let angle = std::f64::consts::TAU * x;
    Complex64::new(angle.cos(), angle.sin())
}
