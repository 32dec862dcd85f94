//! Exact binary itineraries, the unimodal order and symbol-square geometry.

mod code;
mod dyadic;
mod order;

pub use code::{
    is_primitive, least_rotation, parse_code, primitive_period, rotate_left, word_to_string, Code,
    CodeError, HomoclinicCode, OneSidedCode, PeriodicCode, Tail,
};
pub(crate) use code::parse_word;
pub use dyadic::{Dyadic, DyadicParseError, MAX_EXPONENT};
pub use order::{
    baker_v, cylinder_interval, gray_dyadic, gray_value, square_coords, square_coords_exact,
    tent, unimodal_cmp, unimodal_leq, SquarePoint,
};

/// Parses a word over `{0,1}`.
pub fn parse_binary_word(text: &str) -> Result<Vec<u8>, CodeError> {
    parse_word(text, text, 0)
}

/// All Lyndon words (primitive least rotations) of length exactly `n`, in
/// lexicographic order.
pub fn lyndon_words(n: usize) -> Vec<Vec<u8>> {
    if n == 0 {
        return Vec::new();
    }
    assert!(n < 64);
    (0u64..1 << n)
        .map(|bits| (0..n).map(|i| ((bits >> (n - 1 - i)) & 1) as u8).collect::<Vec<u8>>())
        .filter(|w| is_primitive(w) && least_rotation(w) == *w)
        .collect()
}

/// All binary words of length `n` in lexicographic order.
pub fn all_words(n: usize) -> impl Iterator<Item = Vec<u8>> {
    assert!(n < 64);
    (0u64..1 << n).map(move |bits| (0..n).map(|i| ((bits >> (n - 1 - i)) & 1) as u8).collect())
}
