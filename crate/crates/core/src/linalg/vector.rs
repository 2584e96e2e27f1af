use crate::Scalar;

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn norm2<S: Scalar>(a: &[S]) -> S {
    dot(a, a)
}

pub fn norm<S: Scalar>(a: &[S]) -> S {
    norm2(a).sqrt()
}

/// `y += a * x`
pub fn axpy<S: Scalar>(a: S, x: &[S], y: &mut [S]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub fn scaled<S: Scalar>(a: S, x: &[S]) -> Vec<S> {
    x.iter().map(|&v| a * v).collect()
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// Standard basis vector `e_i` of length `d`.
pub fn unit<S: Scalar>(d: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); d];
    v[i] = S::one();
    v
}

/// `x / |x|`, or `None` for the zero vector.
pub fn normalized<S: Scalar>(x: &[S]) -> Option<Vec<S>> {
    let n = norm(x);
    if n == S::zero() || !n.is_finite() {
        None
    } else {
        Some(scaled(S::one() / n, x))
    }
}
