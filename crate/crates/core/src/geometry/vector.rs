//! Fixed-size vector helpers on `[f64; N]`.

pub type Point<const N: usize> = [f64; N];

#[inline]
pub fn dot<const N: usize>(a: &Point<N>, b: &Point<N>) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn sub<const N: usize>(a: &Point<N>, b: &Point<N>) -> Point<N> {
    std::array::from_fn(|i| a[i] - b[i])
}

#[inline]
pub fn add<const N: usize>(a: &Point<N>, b: &Point<N>) -> Point<N> {
    std::array::from_fn(|i| a[i] + b[i])
}

#[inline]
pub fn scale<const N: usize>(a: &Point<N>, k: f64) -> Point<N> {
    std::array::from_fn(|i| a[i] * k)
}

/// `a + k·b`.
#[inline]
pub fn axpy<const N: usize>(a: &Point<N>, k: f64, b: &Point<N>) -> Point<N> {
    std::array::from_fn(|i| a[i] + k * b[i])
}

#[inline]
pub fn norm_sq<const N: usize>(a: &Point<N>) -> f64 {
    dot(a, a)
}

#[inline]
pub fn norm<const N: usize>(a: &Point<N>) -> f64 {
    norm_sq(a).sqrt()
}

#[inline]
pub fn dist<const N: usize>(a: &Point<N>, b: &Point<N>) -> f64 {
    norm(&sub(a, b))
}

#[inline]
pub fn dist_sq<const N: usize>(a: &Point<N>, b: &Point<N>) -> f64 {
    norm_sq(&sub(a, b))
}

pub fn zero<const N: usize>() -> Point<N> {
    [0.0; N]
}

/// Lexicographic comparison with a total order on floats.
pub fn lex_cmp<const N: usize>(a: &Point<N>, b: &Point<N>) -> std::cmp::Ordering {
    for i in 0..N {
        match a[i].total_cmp(&b[i]) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}
