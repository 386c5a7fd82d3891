pub mod bench;
pub mod entropy;
pub mod envelope;
pub mod error;
pub mod geometry;
pub mod hull2;
pub mod hull3;
pub mod io;
pub mod instances;
pub mod ledger;
pub mod maxima;
pub mod oracles;
pub mod runstack;
pub mod visibility;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/entropy.md")]
    mod entropy {}
    #[doc = include_str!("../../../book/src/maxima.md")]
    mod maxima {}
    #[doc = include_str!("../../../book/src/hull2d.md")]
    mod hull2d {}
    #[doc = include_str!("../../../book/src/envelope.md")]
    mod envelope {}
    #[doc = include_str!("../../../book/src/visibility.md")]
    mod visibility {}
    #[doc = include_str!("../../../book/src/hull3d.md")]
    mod hull3d {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/bench.md")]
    mod bench {}
}
