//! Command implementations behind the `a4` binary. Each returns an
//! [`OutputDocument`]; rendering and exit codes are left to the caller.

use std::cell::OnceCell;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cones::ConeError;
use crate::exact::{format_rational, Rational};
use crate::fan::d4::{build_star_fan, compute_stabilizer, D4Fan, Stabilizer};
use crate::fan::FanError;
use crate::intersection::{DivisorMonomial, IntersectionError, MultiplierSet, RecursiveEvaluator, SolvedSystem};
use crate::proportionality::l_top;
use crate::report::OutputDocument;
use crate::tables::{
    geometric_basis, igusa_table, voronoi_table, FaberData, IgusaTable, TablesError, VoronoiTable,
    FABER_HEADER_NOTE, TOP_DEGREE,
};
use crate::verify::{run_checks, VerifyOptions};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
    #[error(transparent)]
    Tables(#[from] TablesError),
}

impl CommandError {
    /// 2 for usage errors, 1 for failed computations.
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn cached<'a, T, E>(cell: &'a OnceCell<T>, init: impl FnOnce() -> Result<T, E>) -> Result<&'a T, E> {
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let v = init()?;
    Ok(cell.get_or_init(|| v))
}

/// Lazily built shared state: the fan, its stabilizer and the solved system.
#[derive(Default)]
pub struct Pipeline {
    fan: OnceCell<D4Fan>,
    stabilizer: OnceCell<Stabilizer>,
    solved: OnceCell<SolvedSystem>,
}

impl Pipeline {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fan(&self) -> Result<&D4Fan, CommandError> {
        Ok(cached(&self.fan, build_star_fan)?)
    }

    pub fn stabilizer(&self) -> Result<&Stabilizer, CommandError> {
        let fan = self.fan()?;
        Ok(cached(&self.stabilizer, || compute_stabilizer(fan))?)
    }

    pub fn solved(&self) -> Result<&SolvedSystem, CommandError> {
        let fan = self.fan()?;
        Ok(cached(&self.solved, || SolvedSystem::for_fan(&fan.star, MultiplierSet::FacePowers))?)
    }

    /// `E^10` on the toric chart and its quotient by the stabilizer order.
    pub fn e10(&self) -> Result<(Rational, usize), CommandError> {
        let value = self.solved()?.center_power_value()?;
        Ok((value, self.stabilizer()?.order()))
    }

    pub fn igusa(&self, faber: &FaberData) -> IgusaTable {
        igusa_table(&l_top(4).value, faber)
    }

    pub fn voronoi(&self, faber: &FaberData) -> Result<VoronoiTable, CommandError> {
        let (e10, order) = self.e10()?;
        Ok(voronoi_table(&self.igusa(faber), &e10, order)?)
    }
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(
        v.iter()
            .map(|x| x.to_i64().map(Value::from).unwrap_or_else(|| Value::String(x.to_string())))
            .collect(),
    )
}

pub fn fan_report(p: &Pipeline) -> Result<OutputDocument, CommandError> {
    let fan = p.fan()?;
    let stab = p.stabilizer()?;
    let mut doc = OutputDocument::new("fan report");
    let rays: Vec<Value> = fan
        .ray_coords
        .iter()
        .zip(&fan.representatives)
        .enumerate()
        .map(|(i, (c, v))| json!({ "label": format!("D{}", i + 1), "minimal_vector": v, "coords": ints(c) }))
        .collect();
    let cones: Vec<Value> = fan
        .star
        .top_cones()
        .iter()
        .map(|c| Value::Array(c.iter().filter(|&i| i > 0).map(|i| json!(format!("D{i}"))).collect()))
        .collect();
    let dets: Vec<String> = fan.cone_dets.iter().map(|d| d.to_string()).collect();
    let all_basic = fan.cone_dets.iter().all(|d| d == &BigInt::from(1) || d == &BigInt::from(-1));
    doc.data = json!({
        "lattice": fan.lattice.name(),
        "coordinate_order": ["S11", "S22", "S33", "S44", "S12", "S13", "S14", "S23", "S24", "S34"],
        "gram_matrix": fan.form.gram(),
        "ray_count": fan.rays.len(),
        "rays": rays,
        "eta": ints(&fan.eta),
        "eta_content": fan.eta_content.to_string(),
        "facet_count": fan.facets.len(),
        "rays_per_facet": fan.facets.iter().map(|f| f.incident.len()).collect::<Vec<_>>(),
        "top_cone_count": fan.star.top_cones().len(),
        "cones": cones,
        "cone_determinants": dets,
        "all_basic": all_basic,
        "stabilizer_order": stab.order(),
    });
    doc.notes.push("each top cone is eta together with the rays of one facet".into());
    Ok(doc)
}

fn parse_monomial(expr: &str) -> Result<DivisorMonomial, CommandError> {
    let text = if expr.eq_ignore_ascii_case("e10") { "E^10" } else { expr };
    let m = DivisorMonomial::parse(text, 13).map_err(|e| CommandError::Usage(e.to_string()))?;
    if m.degree() as usize != TOP_DEGREE {
        return Err(CommandError::Usage(format!(
            "monomial {m} has degree {}, expected {TOP_DEGREE}",
            m.degree()
        )));
    }
    if m.exponent(0) == 0 {
        return Err(CommandError::Usage(format!(
            "monomial {m} must contain E; only numbers localized at E are computed"
        )));
    }
    Ok(m)
}

pub fn intersection(p: &Pipeline, expr: &str) -> Result<OutputDocument, CommandError> {
    let m = parse_monomial(expr)?;
    let fan = p.fan()?;
    let solved = p.solved()?;
    let system_value = solved.value(&m, &fan.star);
    let recursive_value = RecursiveEvaluator::new(&fan.star).evaluate(&m)?;
    let agree = system_value.as_ref().map(|v| v == &recursive_value);

    let mut doc = OutputDocument::new("intersection").input("monomial", m.to_string());
    match &system_value {
        Some(v) => doc.push_result("toric_system", v, "linear system of linear-equivalence relations"),
        None => doc.notes.push("this monomial is not an unknown of the linear system; only the recursive value is available".into()),
    }
    doc.push_result("toric_recursive", &recursive_value, "recursive localization evaluator");
    if m == DivisorMonomial::center_power(13, TOP_DEGREE as u8) {
        let order = p.stabilizer()?.order();
        let moduli = &recursive_value / Rational::from_integer(BigInt::from(order));
        doc.push_result("moduli", &moduli, format!("toric value divided by the stabilizer order {order}"));
    }
    let d = solved.diagnostics();
    doc.data = json!({
        "agree": agree,
        "system": {
            "rows": d.rows,
            "unknowns": d.unknowns,
            "multipliers": d.multipliers,
            "rank": d.rank,
            "free_unknowns": d.free_unknowns.len(),
            "determined_unknowns": d.determined_unknowns,
        },
    });
    if let (Some(v), Some(false)) = (&system_value, agree) {
        return Err(CommandError::Intersection(IntersectionError::Internal(format!(
            "engines disagree on {m}: system {}, recursive {}",
            format_rational(v),
            format_rational(&recursive_value)
        ))));
    }
    Ok(doc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Igusa,
    Voronoi,
    Ltop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Basis {
    /// `L^k E^l F^{10-k-l}`.
    #[default]
    Lfe,
    /// `L^k (D^Vor)^m E^l`.
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableOptions {
    pub stack: bool,
    pub basis: Basis,
    pub genus: usize,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            stack: false,
            basis: Basis::Lfe,
            genus: 4,
        }
    }
}

pub fn tables(p: &Pipeline, kind: TableKind, opts: TableOptions) -> Result<OutputDocument, CommandError> {
    if opts.genus == 0 {
        return Err(CommandError::Usage("genus must be positive".into()));
    }
    if kind != TableKind::Ltop && opts.genus != 4 {
        return Err(CommandError::Usage("intersection tables exist only for genus 4".into()));
    }
    if kind != TableKind::Voronoi && opts.basis != Basis::Lfe {
        return Err(CommandError::Usage("--basis applies only to the voronoi table".into()));
    }
    let scale = if opts.stack { Rational::new(1.into(), 2.into()) } else { Rational::from_integer(1.into()) };
    let faber = FaberData::genus_four();
    let mut doc = OutputDocument::new(match kind {
        TableKind::Igusa => "tables igusa",
        TableKind::Voronoi => "tables voronoi",
        TableKind::Ltop => "tables ltop",
    })
    .input("genus", opts.genus.to_string())
    .input("stack", opts.stack.to_string());
    if opts.stack {
        doc.notes.push(
            "stack normalization: -1 acts trivially, so every top intersection number is halved".into(),
        );
    }
    match kind {
        TableKind::Ltop => {
            let r = l_top(opts.genus);
            let v = if opts.stack { r.stack_value } else { r.value };
            doc.push_result(format!("L^{}", r.top_power), &v, "Hirzebruch-Mumford proportionality");
        }
        TableKind::Igusa => {
            let t = p.igusa(&faber);
            for k in (0..=TOP_DEGREE).rev() {
                doc.push_result(
                    format!("a_{k}"),
                    &(&t.a[k] * &scale),
                    format!("<L^{k} D^{}>, recurrence a_(k-1) = 8 a_k - b_(k-1)", TOP_DEGREE - k),
                );
            }
            doc.notes.push(FABER_HEADER_NOTE.into());
        }
        TableKind::Voronoi => {
            let v = p.voronoi(&faber)?;
            let (e10, order) = p.e10()?;
            doc = doc.input("basis", match opts.basis {
                Basis::Lfe => "lfe",
                Basis::Geometric => "geometric",
            });
            match opts.basis {
                Basis::Lfe => {
                    for (k, l, a) in v.entries() {
                        let prov = match l {
                            0 => "pullback of the Igusa number a_k".to_string(),
                            TOP_DEGREE => format!("toric E^10 = {} divided by stabilizer order {order}", format_rational(&e10)),
                            _ => "projection formula: E is contracted to a point".to_string(),
                        };
                        doc.push_result(
                            format!("<L^{k} E^{l} F^{}>", TOP_DEGREE - k - l),
                            &(a * &scale),
                            prov,
                        );
                    }
                }
                Basis::Geometric => {
                    for k in 0..=TOP_DEGREE {
                        for l in 0..=TOP_DEGREE - k {
                            let m = TOP_DEGREE - k - l;
                            let x = geometric_basis(&v, k, m, l)?;
                            doc.push_result(
                                format!("<L^{k} D^{m} E^{l}>"),
                                &(x * &scale),
                                "expansion of D = F - 4E",
                            );
                        }
                    }
                }
            }
            doc.notes.push(FABER_HEADER_NOTE.into());
        }
    }
    Ok(doc)
}

pub fn verify(p: &Pipeline, opts: &VerifyOptions) -> Result<OutputDocument, CommandError> {
    let mut doc = OutputDocument::new("verify");
    if opts.faber != FaberData::genus_four() {
        doc = doc.input("faber_data", "modified");
    }
    doc.checks = run_checks(p, opts);
    Ok(doc)
}
