//! Orientation and in-circumcircle predicates with an exact rational
//! fallback. The float evaluation is trusted only when the determinant
//! magnitude clears a conservative threshold; near-degenerate cases are
//! re-evaluated in `BigRational` arithmetic built from the exact binary
//! values of the inputs.

use num_rational::BigRational;
use num_traits::Zero;

use super::Point;
use crate::num::Real;

/// Relative threshold below which the float determinant sign is not trusted.
const FILTER_EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of_f64(v: f64) -> Sign {
        if v > 0.0 {
            Sign::Positive
        } else if v < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    fn of_big(v: &BigRational) -> Sign {
        if v.is_zero() {
            Sign::Zero
        } else if v > &BigRational::zero() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

fn big(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite coordinate")
}

fn big_point<F: Real>(p: Point<F>) -> (BigRational, BigRational) {
    (big(p.x.as_f64()), big(p.y.as_f64()))
}

/// Sign of the orientation determinant: positive iff `a → b → c` turns left.
pub fn orient2d<F: Real>(a: Point<F>, b: Point<F>, c: Point<F>) -> Sign {
    let (ax, ay) = (a.x.as_f64(), a.y.as_f64());
    let (bx, by) = (b.x.as_f64(), b.y.as_f64());
    let (cx, cy) = (c.x.as_f64(), c.y.as_f64());

    let t1 = (bx - ax) * (cy - ay);
    let t2 = (by - ay) * (cx - ax);
    let det = t1 - t2;
    let mag = t1.abs() + t2.abs();
    if det.abs() > FILTER_EPS * mag.max(1e-300) {
        return Sign::of_f64(det);
    }

    let (ax, ay) = big_point(a);
    let (bx, by) = big_point(b);
    let (cx, cy) = big_point(c);
    let det = (&bx - &ax) * (&cy - &ay) - (&by - &ay) * (&cx - &ax);
    Sign::of_big(&det)
}

/// Sign of the in-circumcircle determinant for the triangle `a, b, c`
/// (counter-clockwise): positive iff `d` lies strictly inside the
/// circumcircle, zero iff cocircular.
pub fn incircle<F: Real>(a: Point<F>, b: Point<F>, c: Point<F>, d: Point<F>) -> Sign {
    let adx = a.x.as_f64() - d.x.as_f64();
    let ady = a.y.as_f64() - d.y.as_f64();
    let bdx = b.x.as_f64() - d.x.as_f64();
    let bdy = b.y.as_f64() - d.y.as_f64();
    let cdx = c.x.as_f64() - d.x.as_f64();
    let cdy = c.y.as_f64() - d.y.as_f64();

    let ad2 = adx * adx + ady * ady;
    let bd2 = bdx * bdx + bdy * bdy;
    let cd2 = cdx * cdx + cdy * cdy;

    let t1 = ad2 * (bdx * cdy - bdy * cdx);
    let t2 = bd2 * (adx * cdy - ady * cdx);
    let t3 = cd2 * (adx * bdy - ady * bdx);
    let det = t1 - t2 + t3;
    let mag = t1.abs() + t2.abs() + t3.abs();
    if det.abs() > FILTER_EPS * mag.max(1e-300) {
        return Sign::of_f64(det);
    }

    incircle_exact(a, b, c, d)
}

fn incircle_exact<F: Real>(a: Point<F>, b: Point<F>, c: Point<F>, d: Point<F>) -> Sign {
    let (ax, ay) = big_point(a);
    let (bx, by) = big_point(b);
    let (cx, cy) = big_point(c);
    let (dx, dy) = big_point(d);

    let adx = &ax - &dx;
    let ady = &ay - &dy;
    let bdx = &bx - &dx;
    let bdy = &by - &dy;
    let cdx = &cx - &dx;
    let cdy = &cy - &dy;

    let ad2 = &adx * &adx + &ady * &ady;
    let bd2 = &bdx * &bdx + &bdy * &bdy;
    let cd2 = &cdx * &cdx + &cdy * &cdy;

    let det = &ad2 * (&bdx * &cdy - &bdy * &cdx) - &bd2 * (&adx * &cdy - &ady * &cdx)
        + &cd2 * (&adx * &bdy - &ady * &bdx);
    Sign::of_big(&det)
}

/// Circumcenter of a non-degenerate triangle, in float arithmetic.
pub fn circumcenter<F: Real>(a: Point<F>, b: Point<F>, c: Point<F>) -> Point<F> {
    let two = F::of(2.0);
    let abx = b.x - a.x;
    let aby = b.y - a.y;
    let acx = c.x - a.x;
    let acy = c.y - a.y;
    let ab2 = abx * abx + aby * aby;
    let ac2 = acx * acx + acy * acy;
    let d = two * (abx * acy - aby * acx);
    let ux = (acy * ab2 - aby * ac2) / d;
    let uy = (abx * ac2 - acx * ab2) / d;
    Point::new(a.x + ux, a.y + uy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point2;

    #[test]
    fn orient_basics() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 0.0);
        assert_eq!(orient2d(a, b, Point2::new(0.0, 1.0)), Sign::Positive);
        assert_eq!(orient2d(a, b, Point2::new(0.0, -1.0)), Sign::Negative);
        assert_eq!(orient2d(a, b, Point2::new(2.0, 0.0)), Sign::Zero);
    }

    #[test]
    fn orient_near_degenerate_uses_exact_path() {
        // Classic adversarial case: c almost on the line through a, b.
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1e-30, 1e-30);
        let c = Point2::new(2e-30, 2e-30);
        assert_eq!(orient2d(a, b, c), Sign::Zero);
    }

    #[test]
    fn incircle_square_is_cocircular() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 0.0);
        let c = Point2::new(1.0, 1.0);
        let d = Point2::new(0.0, 1.0);
        assert_eq!(incircle(a, b, c, d), Sign::Zero);
        assert_eq!(incircle(a, b, c, Point2::new(0.5, 0.5)), Sign::Positive);
        assert_eq!(incircle(a, b, c, Point2::new(2.0, 2.0)), Sign::Negative);
    }

    #[test]
    fn circumcenter_right_triangle() {
        let cc = circumcenter(
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        );
        assert!((cc.x - 0.5).abs() < 1e-15 && (cc.y - 0.5).abs() < 1e-15);
    }
}
