//! Zero-padded tensor embeddings of the matrices acting on a single mode.
//!
//! Each placement puts a matrix (or its transpose) in the first slice of an
//! otherwise zero tensor, so that one t-product reproduces a mode product.

use crate::error::{Result, TensorError};
use crate::product::t_product;
use crate::tensor::{Mode, Tensor3};
use crate::MatrixR;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Placement {
    /// `n1 x n2 x n1`, lateral slice 1 = `F`: `F *_2 C = C x_1 F`.
    F,
    /// `n1 x n1 x n3`, frontal slice 1 = `F`: `F~ *_3 C = C x_1 F`.
    FTilde,
    /// `n2 x n2 x n3`, frontal slice 1 = `G^T`: `C *_3 G = C x_2 G`.
    G,
    /// `n1 x n2 x n2`, horizontal slice 1 = `G`: `G~ *_1 C = C x_2 G`.
    GTilde,
    /// `n1 x n3 x m`, horizontal slice 1 = `H^T`: `C *_1 H = C x_3 H`.
    H,
    /// `n3 x n2 x m`, lateral slice 1 = `H^T`: `C *_2 H~ = C x_3 H`.
    HTilde,
}

impl Placement {
    pub const ALL: [Placement; 6] = [
        Placement::F,
        Placement::FTilde,
        Placement::G,
        Placement::GTilde,
        Placement::H,
        Placement::HTilde,
    ];

    /// Mode whose index the embedded matrix acts on.
    pub fn acts_on(self) -> Mode {
        match self {
            Placement::F | Placement::FTilde => Mode::One,
            Placement::G | Placement::GTilde => Mode::Two,
            Placement::H | Placement::HTilde => Mode::Three,
        }
    }

    /// Mode of the t-product realising the embedding.
    pub fn product_mode(self) -> Mode {
        match self {
            Placement::F => Mode::Two,
            Placement::FTilde => Mode::Three,
            Placement::G => Mode::Three,
            Placement::GTilde => Mode::One,
            Placement::H => Mode::One,
            Placement::HTilde => Mode::Two,
        }
    }

    /// Whether the embedding is the left operand of its t-product.
    pub fn is_left(self) -> bool {
        matches!(self, Placement::F | Placement::FTilde | Placement::GTilde)
    }

    /// Evaluates the t-product of an embedding with `c` in the placement's order.
    pub fn apply(self, embedded: &Tensor3, c: &Tensor3) -> Result<Tensor3> {
        if self.is_left() {
            t_product(embedded, c, self.product_mode())
        } else {
            t_product(c, embedded, self.product_mode())
        }
    }
}

/// Builds the embedding of `m` for a partner tensor of dims `c_dims`.
pub fn embed_constraint(m: &MatrixR, placement: Placement, c_dims: [usize; 3]) -> Result<Tensor3> {
    let [n1, n2, n3] = c_dims;
    let ax = placement.acts_on().axis();
    let n = c_dims[ax];
    let square = matches!(placement.acts_on(), Mode::One | Mode::Two);
    if m.ncols() != n || (square && m.nrows() != n) || m.nrows() == 0 {
        return Err(TensorError::Dimension(format!(
            "{:?} embedding needs {} a {}-column matrix, got {:?}",
            placement,
            if square { "square" } else { "a nonempty" },
            n,
            m.shape()
        )));
    }
    let rows = m.nrows();
    let (dims, slice_mode, first) = match placement {
        Placement::F => ([n1, n2, n1], Mode::Two, m.clone()),
        Placement::FTilde => ([n1, n1, n3], Mode::Three, m.clone()),
        Placement::G => ([n2, n2, n3], Mode::Three, m.transpose()),
        Placement::GTilde => ([n1, n2, n2], Mode::One, m.clone()),
        Placement::H => ([n1, n3, rows], Mode::One, m.transpose()),
        Placement::HTilde => ([n3, n2, rows], Mode::Two, m.transpose()),
    };
    let (sr, sc) = slice_mode.slice_shape(dims);
    let mut slices = vec![MatrixR::zeros(sr, sc); dims[slice_mode.axis()]];
    slices[0] = first;
    Tensor3::from_slices(slice_mode, &slices)
}
