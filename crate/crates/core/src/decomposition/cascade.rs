use std::collections::BTreeMap;

use serde::Serialize;

use super::certificate::EmulationCertificate;
use super::kernel::Kernel;
use super::tracing::{build_product, LevelProduct};
use crate::error::{Error, Result};
use crate::relational::RelationalFunctor;
use crate::semigroupoid::ArrowId;

/// `T ≀_φ K_φ`: pairs `(f, enc_f(a))` with
/// `(f, a)(g, b) = (fg, enc_fg(dec_f(a)·dec_g(b)))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cascade {
    pub product: LevelProduct,
    pub kernel: Kernel,
}

/// Builds the cascade and its certificate without judging the certificate.
pub fn pinhole_cascade_unchecked(
    phi: &RelationalFunctor,
    kernel: &Kernel,
) -> Result<(Cascade, EmulationCertificate)> {
    let codec = &kernel.codec;
    let mut entries = Vec::new();
    for (f, pre) in kernel.preimages.iter().enumerate() {
        for &a in pre {
            entries.push((f, codec.encode(f, a)?, a));
        }
    }
    let product = build_product(
        phi.target_arc().clone(),
        phi.source_arc().clone(),
        phi.source(),
        entries,
        |fg, ab| codec.encode(fg, ab),
    )?;
    let cert = product.certificate()?;
    Ok((
        Cascade {
            product,
            kernel: kernel.clone(),
        },
        cert,
    ))
}

/// Builds the cascade and fails with the certificate's defects if the
/// candidate emulation does not validate.
pub fn pinhole_cascade(
    phi: &RelationalFunctor,
    kernel: &Kernel,
) -> Result<(Cascade, EmulationCertificate)> {
    let (cascade, cert) = pinhole_cascade_unchecked(phi, kernel)?;
    if !cert.valid() {
        return Err(Error::EmulationViolation(cert.describe().join("; ")));
    }
    Ok((cascade, cert))
}

impl Cascade {
    pub fn arrow_count(&self) -> usize {
        self.product.arrow_count()
    }

    /// For each composable top pair, the induced bottom composition.
    pub fn rule_table(&self) -> RuleTable {
        let p = &self.product;
        let mut cells: BTreeMap<(ArrowId, ArrowId), BTreeMap<(ArrowId, ArrowId), ArrowId>> =
            BTreeMap::new();
        for (&(i, j), &k) in p.semigroupoid.table() {
            let (f, a) = p.pairs[i];
            let (g, b) = p.pairs[j];
            cells
                .entry((f, g))
                .or_default()
                .insert((a, b), p.pairs[k].1);
        }
        let kernel_arrows = self.kernel.arrow_set();
        let source = &p.source;
        let carries = cells
            .iter()
            .map(|(&key, cell)| {
                let carry = kernel_arrows.iter().copied().find(|&k| {
                    cell.iter().all(|(&(a, b), &c)| {
                        source.compose_path(&[Some(a), Some(b), Some(k)]) == Some(c)
                    })
                });
                (key, carry)
            })
            .collect();
        RuleTable { cells, carries }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleTable {
    /// `(f, g) ↦ {(a', b') ↦ c'}` with `(f, a')(g, b') = (fg, c')`.
    pub cells: BTreeMap<(ArrowId, ArrowId), BTreeMap<(ArrowId, ArrowId), ArrowId>>,
    /// The first kernel arrow `k` with `c' = a'·b'·k` throughout the cell, if any.
    pub carries: BTreeMap<(ArrowId, ArrowId), Option<ArrowId>>,
}

impl RuleTable {
    pub fn render(&self, cascade: &Cascade) -> String {
        let top = &cascade.product.top;
        let s = &cascade.product.source;
        let mut out = String::new();
        for ((f, g), cell) in &self.cells {
            let carry = match self.carries[&(*f, *g)] {
                Some(k) => format!("carry {}", s.arrow_label(k)),
                None => "no uniform carry".to_string(),
            };
            out.push_str(&format!(
                "{} · {}: {}\n",
                top.arrow_label(*f),
                top.arrow_label(*g),
                carry
            ));
            for ((a, b), c) in cell {
                out.push_str(&format!(
                    "  {} · {} -> {}\n",
                    s.arrow_label(*a),
                    s.arrow_label(*b),
                    s.arrow_label(*c)
                ));
            }
        }
        out
    }
}
