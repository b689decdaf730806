//! Prime fields, sparse polynomials, graded hypersurface rings and the dense
//! linear algebra used on their graded pieces.

pub mod field;
pub mod forcing_data;
pub mod matrix;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ring;

pub use field::PrimeField;
pub use forcing_data::ForcingData;
pub use matrix::Matrix;
pub use monomial::Monomial;
pub use poly::Poly;
pub use ring::{GradedMap, GradedRing, Piece, DEFAULT_PIECE_CAP};
