//! Flat, serializable component records: one schema for both the
//! engine's computed decompositions and the catalog's template
//! instantiations, so consumers can diff them directly.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{CatalogDecomposition, FamilyKind};
use crate::engine::DecompositionReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("center does not fit in 64 bits (level {level}); lower the truncation")]
    CenterTooWide { level: u32 },
}

/// One region of a decomposition: the union of balls
/// `center + 2^level Z_2` over `centers`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ComponentRecord {
    pub kind: String,
    pub level: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub centers: Vec<u64>,
    pub provenance: String,
    pub conditional: bool,
}

fn narrow(c: &BigUint, level: u32) -> Result<u64, ReportError> {
    let digits = c.to_u64_digits();
    match digits.len() {
        0 => Ok(0),
        1 => Ok(digits[0]),
        _ => Err(ReportError::CenterTooWide { level }),
    }
}

fn record(
    kind: &str,
    level: u32,
    k: Option<u64>,
    n: Option<u32>,
    centers: &[BigUint],
    provenance: &str,
    conditional: bool,
) -> Result<ComponentRecord, ReportError> {
    Ok(ComponentRecord {
        kind: kind.to_string(),
        level,
        k,
        n,
        centers: centers
            .iter()
            .map(|c| narrow(c, level))
            .collect::<Result<_, _>>()?,
        provenance: provenance.to_string(),
        conditional,
    })
}

fn sort_records(records: &mut [ComponentRecord]) {
    records.sort_by(|a, b| {
        (a.level, a.centers.iter().min().copied())
            .cmp(&(b.level, b.centers.iter().min().copied()))
    });
}

pub fn engine_records(report: &DecompositionReport) -> Result<Vec<ComponentRecord>, ReportError> {
    let mut out = Vec::new();
    for orbit in &report.fixed_and_periodic {
        let kind = if orbit.period == 1 {
            "fixed_point"
        } else {
            "periodic_orbit"
        };
        out.push(record(
            kind,
            report.max_level,
            None,
            None,
            &orbit.points,
            "engine: orbit pinned by iteration",
            false,
        )?);
    }
    for comp in &report.minimal_components {
        let centers: Vec<BigUint> = comp.balls.iter().map(|b| b.center().clone()).collect();
        out.push(record(
            "minimal_component",
            comp.level,
            None,
            None,
            &centers,
            "engine: strongly growing cycle",
            false,
        )?);
    }
    for region in &report.basin_regions {
        out.push(record(
            "basin",
            region.ball.level(),
            None,
            None,
            std::slice::from_ref(region.ball.center()),
            "engine: growing-tails region",
            false,
        )?);
    }
    for c in &report.unresolved {
        out.push(record(
            "unresolved",
            c.level,
            None,
            None,
            &c.elements,
            "engine: still splitting at the truncation level",
            false,
        )?);
    }
    sort_records(&mut out);
    Ok(out)
}

pub fn catalog_records(dec: &CatalogDecomposition) -> Result<Vec<ComponentRecord>, ReportError> {
    let mut out = Vec::new();
    for c in &dec.components {
        let kind = match c.kind {
            FamilyKind::FixedPoint => "fixed_point",
            FamilyKind::PeriodicOrbit => "periodic_orbit",
            FamilyKind::FiniteComponent => "minimal_component",
            FamilyKind::IndexedFamily => "minimal_component",
            FamilyKind::Basin => "basin",
            FamilyKind::Tail => "tail",
        };
        out.push(record(
            kind,
            c.level,
            c.k,
            c.n,
            &c.centers,
            &c.provenance,
            c.conditional,
        )?);
    }
    sort_records(&mut out);
    Ok(out)
}
