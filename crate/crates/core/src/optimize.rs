//! One-dimensional minimization.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol` (or after 400 steps) and
/// returns the best point seen with its value.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..400 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_the_vertex_of_a_parabola() {
        let (x, fx) = golden_section(|x| (x - 0.3) * (x - 0.3), -5.0, 7.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx < 1e-18);
        // An offset hides differences below sqrt(machine epsilon).
        let (x, _) = golden_section(|x| (x - 0.3) * (x - 0.3) + 2.0, -5.0, 7.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-7);
    }

    #[test]
    fn handles_a_kink() {
        let (x, _) = golden_section(|x: f64| (x + 1.25).abs(), -3.0, 3.0, 1e-13);
        assert!((x + 1.25).abs() < 1e-12);
    }

    #[test]
    fn minimum_at_the_edge() {
        let (x, _) = golden_section(|x| x, 0.0, 1.0, 1e-12);
        assert!(x < 1e-11);
    }
}
