use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;

use dualspace_core::embeddings::{
    b_embed_point, b_embed_rank1, compact_flat_coordinates, embed, image_fraction, log_noncompact, Embedding,
    GroupElement,
};
use dualspace_core::lattice::{cut_radius, cut_radius_naive, is_orthonormal, LatticeBasis, ORTHONORMAL_TOL};
use dualspace_core::numkernel::Matrix;
use dualspace_core::spaces::{
    catalog, flat_decompose, transitivity_element, Family, Side, SpaceDescriptor, SubspacePoint,
};
use dualspace_core::verify::{run_property, Property, PropertyReport};
use dualspace_core::Error as CoreError;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::input::SpaceArg;
use crate::output::{fmt_f64, matrix_json, Format, Report};

pub fn lattice_info(space: &SpaceArg, seed: u64) -> Report {
    let lattice = space.lattice();
    Report::new(
        space.to_string(),
        "lattice-info",
        seed,
        json!({
            "rank": lattice.rank(),
            "generators": lattice.generators(),
            "gram": lattice.gram(),
            "orthonormal": is_orthonormal(lattice, ORTHONORMAL_TOL),
            "generator_norms": lattice.generator_norms(),
        }),
    )
}

/// `direction` is in orthonormal coordinates unless `lattice_coords`.
pub fn cut_radius_cmd(space: &SpaceArg, direction: &[f64], lattice_coords: bool, seed: u64) -> CliResult<Report> {
    let lattice = space.lattice();
    if direction.len() != lattice.rank() {
        return Err(CliError::Usage(format!("direction needs {} coordinates", lattice.rank())));
    }
    let x = if lattice_coords { direction.to_vec() } else { lattice.to_lattice(direction)? };
    let r = cut_radius(lattice, &x)?;
    let naive = cut_radius_naive(lattice, &x)?;
    let method = if r.used_closed_form { "closed-form" } else { "brute-force" };
    let mut report = Report::new(
        space.to_string(),
        method,
        seed,
        json!({
            "direction_lattice": x,
            "direction_metric": lattice.to_metric(&x)?,
            "radius": r.radius,
            "minimizer": r.minimizer,
            "naive_radius": naive,
        }),
    );
    report.residuals.insert("naive-vs-radius".into(), (naive - r.radius).abs());
    Ok(report)
}

fn grid_rows(lattice: &LatticeBasis, samples: usize) -> CliResult<(Vec<&'static str>, Vec<Vec<f64>>)> {
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut rows = Vec::with_capacity(samples);
    let header = match lattice.rank() {
        1 => vec!["index", "u1", "radius"],
        2 => vec!["index", "phi", "u1", "u2", "radius"],
        3 => vec!["index", "theta", "phi", "u1", "u2", "u3", "radius"],
        r => return Err(CliError::Domain(format!("cut-locus grids need rank at most 3, got {r}"))),
    };
    for i in 0..samples {
        let (angles, u): (Vec<f64>, Vec<f64>) = match lattice.rank() {
            1 => (vec![], vec![1.0]),
            2 => {
                let phi = 2.0 * PI * i as f64 / samples as f64;
                (vec![phi], vec![phi.cos(), phi.sin()])
            }
            _ => {
                let z = 1.0 - (2 * i + 1) as f64 / samples as f64;
                let theta = z.acos();
                let phi = (i as f64 * golden).rem_euclid(2.0 * PI);
                (vec![theta, phi], vec![theta.sin() * phi.cos(), theta.sin() * phi.sin(), z])
            }
        };
        let radius = cut_radius(lattice, &lattice.to_lattice(&u)?)?.radius;
        let mut row = vec![i as f64];
        row.extend(angles);
        row.extend(u);
        row.push(radius);
        rows.push(row);
    }
    Ok((header, rows))
}

pub fn cutlocus_grid(
    space: &SpaceArg,
    samples: usize,
    seed: u64,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<()> {
    let (header, rows) = grid_rows(space.lattice(), samples)?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&header)?;
            for row in rows {
                let mut cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
                cells[0] = (row[0] as usize).to_string();
                w.write_record(cells)?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Json => {
            let min = rows.iter().map(|r| *r.last().expect("radius")).fold(f64::INFINITY, f64::min);
            Report::new(
                space.to_string(),
                "cutlocus-grid",
                seed,
                json!({ "columns": header, "rows": rows, "min_radius": min }),
            )
            .write(format, out)
        }
    }
}

/// How the embedding input is given.
pub enum EmbedInput {
    /// Graph block `Y` (`m × n`) of the space-like point `span [I; Y]`.
    Block(Matrix),
    /// Noncompact group element.
    Group(Matrix),
    /// Flat parameter of the rank-one `b` map.
    Parameter(f64),
}

fn point_json(space: &SpaceDescriptor, which: Embedding, point: &SubspacePoint) -> CliResult<Value> {
    let z = compact_flat_coordinates(space, point)?;
    let metric = z.metric(space)?;
    let norm = metric.iter().map(|v| v * v).sum::<f64>().sqrt();
    let cut_fraction = if norm == 0.0 { 0.0 } else { norm / cut_radius(space.lattice(), &z.coords)?.radius };
    Ok(json!({
        "subspace": matrix_json(point.rep()),
        "compact_lattice_coordinates": z.coords,
        "compact_metric_coordinates": metric,
        "cut_fraction": cut_fraction,
        "image_fraction": image_fraction(space, which),
    }))
}

fn methods_for(space: &SpaceDescriptor, method: &str) -> CliResult<Vec<Embedding>> {
    if method == "all" {
        let mut v = vec![Embedding::P, Embedding::G, Embedding::F];
        if space.family() == Family::CircleSphere {
            v.push(Embedding::B);
        }
        Ok(v)
    } else {
        Ok(vec![method.parse::<Embedding>().map_err(|e| CliError::Usage(e.to_string()))?])
    }
}

pub fn embed_cmd(space: &SpaceDescriptor, method: &str, input: EmbedInput, seed: u64) -> CliResult<Report> {
    let methods = methods_for(space, method)?;
    if let EmbedInput::Parameter(t) = input {
        if methods != [Embedding::B] {
            return Err(CliError::Usage("--t is only used with --method b".into()));
        }
        let point = b_embed_point(space, t)?;
        let mut body = point_json(space, Embedding::B, &point)?;
        body["angle"] = json!(b_embed_rank1(t));
        return Ok(Report::new(space.id().to_string(), "b", seed, json!({ "t": t, "b": body })));
    }
    let a = match input {
        EmbedInput::Block(y) => GroupElement::new(space, Side::Noncompact, transitivity_element(space, &y)?)?,
        EmbedInput::Group(a) => GroupElement::new(space, Side::Noncompact, a)?,
        EmbedInput::Parameter(_) => unreachable!("handled above"),
    };
    let base = a.base_image(space)?;
    let h = flat_decompose(space, &log_noncompact(space, &base)?)?.h;
    let mut result = serde_json::Map::new();
    result.insert("input_metric_coordinates".into(), json!(h.metric(space)?));
    let mut points = Vec::new();
    for which in &methods {
        let point = embed(space, *which, &a)?;
        let mut body = point_json(space, *which, &point)?;
        if *which == Embedding::B {
            let t = h.metric(space)?[0].abs();
            body["angle"] = json!(b_embed_rank1(t));
        }
        result.insert(which.to_string(), body);
        points.push((*which, point));
    }
    let mut residuals = BTreeMap::new();
    let pgf: Vec<&(Embedding, SubspacePoint)> = points.iter().filter(|(w, _)| *w != Embedding::B).collect();
    for (i, (wa, pa)) in pgf.iter().enumerate() {
        for (wb, pb) in &pgf[i + 1..] {
            residuals.insert(format!("{wa}-{wb}"), pa.distance(pb)?);
        }
    }
    let mut report = Report::new(space.id().to_string(), method, seed, Value::Object(result));
    report.residuals = residuals;
    Ok(report)
}

/// Options of a verification run.
pub struct VerifyOptions<'a> {
    pub space: Option<&'a SpaceDescriptor>,
    pub property: Option<Property>,
    pub samples: usize,
    pub tolerance: Option<f64>,
    pub seed: u64,
}

/// Result of a verification run.
pub struct VerifyOutcome {
    pub report: Report,
    pub reports: Vec<PropertyReport>,
    pub passed: bool,
}

/// Runs the requested suites; checks that do not apply to a space are
/// skipped unless both the space and the property were named.
pub fn verify_cmd(opts: &VerifyOptions<'_>) -> CliResult<VerifyOutcome> {
    let spaces: Vec<SpaceDescriptor> = match opts.space {
        Some(s) => vec![s.clone()],
        None => catalog(),
    };
    let properties: Vec<Property> = match opts.property {
        Some(p) => vec![p],
        None => Property::ALL.to_vec(),
    };
    let explicit = opts.space.is_some() && opts.property.is_some();
    let mut reports: Vec<PropertyReport> = Vec::new();
    let mut skipped: Vec<String> = Vec::new();
    for property in properties {
        let tol = opts.tolerance.unwrap_or_else(|| property.default_tolerance());
        for space in &spaces {
            if opts.space.is_none()
                && ((property == Property::TrigDuality && space.id() != spaces[0].id())
                    || (property == Property::Restriction && space.family() != Family::ComplexGrassmannian))
            {
                continue;
            }
            match run_property(space, property, opts.samples, opts.seed, tol) {
                Ok(r) => reports.extend(r),
                Err(CoreError::Unsupported(why)) if !explicit => {
                    skipped.push(format!("{property}[{}]: {why}", space.id()))
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    let passed = reports.iter().all(PropertyReport::passed);
    let mut report = Report::new(
        opts.space.map_or("all".into(), |s| s.id().to_string()),
        opts.property.map_or("all".into(), |p| p.to_string()),
        opts.seed,
        json!({ "passed": passed, "reports": reports, "skipped": skipped }),
    );
    for r in &reports {
        report.residuals.insert(r.property_name.clone(), r.worst_residual);
    }
    Ok(VerifyOutcome { report, reports, passed })
}

pub fn write_verify_csv(reports: &[PropertyReport], out: &mut dyn Write) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["property", "samples", "failures", "worst_residual", "tolerance", "seed", "passed"])?;
    for r in reports {
        w.write_record([
            r.property_name.clone(),
            r.samples.to_string(),
            r.failures.to_string(),
            fmt_f64(r.worst_residual),
            fmt_f64(r.tolerance),
            r.seed.to_string(),
            r.passed().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
