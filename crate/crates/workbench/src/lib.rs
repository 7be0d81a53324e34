//! File formats, fixtures, property suites, and the command-line front end
//! for the `quantale` library.

pub mod cli;
pub mod enumerate;
pub mod fixtures;
pub mod format;
pub mod suites;
pub mod workspace;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/quantales.md")]
    mod quantales {}
    #[doc = include_str!("../../../book/src/modules.md")]
    mod modules {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    mod transforms {}
    #[doc = include_str!("../../../book/src/ideals.md")]
    mod ideals {}
    #[doc = include_str!("../../../book/src/saturation.md")]
    mod saturation {}
    #[doc = include_str!("../../../book/src/k0.md")]
    mod k0 {}
    #[doc = include_str!("../../../book/src/enumeration.md")]
    mod enumeration {}
    #[doc = include_str!("../../../book/src/file-format.md")]
    mod file_format {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
