//! The bundled example files, compiled in.

use crate::format::{parse_fun, parse_sgd, resolve_fun, FormatError, LoadedFunctor, SgdDocument};

pub const FILES: &[(&str, &str)] = &[
    ("dualmode.sgd", include_str!("../fixtures/dualmode.sgd")),
    ("fig2.sgd", include_str!("../fixtures/fig2.sgd")),
    ("flipflop.sgd", include_str!("../fixtures/flipflop.sgd")),
    ("nocompress.sgd", include_str!("../fixtures/nocompress.sgd")),
    (
        "nocompress_top.sgd",
        include_str!("../fixtures/nocompress_top.sgd"),
    ),
    ("tn2.sgd", include_str!("../fixtures/tn2.sgd")),
    ("tn3.sgd", include_str!("../fixtures/tn3.sgd")),
    ("vessels.sgd", include_str!("../fixtures/vessels.sgd")),
    ("z2.sgd", include_str!("../fixtures/z2.sgd")),
    ("z4.sgd", include_str!("../fixtures/z4.sgd")),
    ("z4gen.sgd", include_str!("../fixtures/z4gen.sgd")),
    ("nocompress.fun", include_str!("../fixtures/nocompress.fun")),
    (
        "odometer2x2.fun",
        include_str!("../fixtures/odometer2x2.fun"),
    ),
    ("z4abs.fun", include_str!("../fixtures/z4abs.fun")),
    ("z4phi.fun", include_str!("../fixtures/z4phi.fun")),
];

pub fn text(name: &str) -> &'static str {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .unwrap_or_else(|| panic!("no bundled file `{name}`"))
}

pub fn sgd(name: &str) -> Result<SgdDocument, FormatError> {
    parse_sgd(text(name))
}

pub fn functor(name: &str) -> Result<LoadedFunctor, FormatError> {
    let fun = parse_fun(text(name))?;
    resolve_fun(&fun, sgd(&fun.source)?, sgd(&fun.target)?)
}
