//! Job execution.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use eqclass::bundle::SplitBundle;
use eqclass::cyclo::parse_rational;
use eqclass::localization::{
    atiyah_singer_class, equivariant_chi_y, specialized_invariants, twisted_class, LocalizationDatum,
};
use eqclass::quotient::{chi_y_quotient, chi_y_quotient_wproj, defect_sum, wproj_class};
use eqclass::verify::{run_suite, suite_names};
use eqclass::wire::{datum_to_json, decode_twist, TwistWire};
use eqclass::{Cyclotomic, Error, YCoeff};

use crate::job::{build, conductor_max, read_json, CommandKind, Failure, Format, JobSpec, Source};
use crate::render;

/// A finished job. `code` is nonzero when the computation ran but reported
/// a failure, as `verify` does for a failed check.
pub struct Report {
    pub json: Value,
    pub pretty: Vec<String>,
    pub code: u8,
    /// Canonical text that replaces the JSON rendering, byte for byte.
    pub raw: Option<String>,
}

impl Report {
    fn ok(json: Value, pretty: Vec<String>) -> Self {
        Report {
            json,
            pretty,
            code: 0,
            raw: None,
        }
    }

    pub fn render(&self, format: Format) -> String {
        if let Some(raw) = &self.raw {
            return format!("{raw}\n");
        }
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("report serializes") + "\n",
            Format::Pretty => self.pretty.iter().map(|l| format!("{l}\n")).collect(),
        }
    }
}

pub fn error_json(f: &Failure) -> String {
    let v = json!({"error": {"kind": f.kind, "message": f.message, "exit_code": f.code}});
    serde_json::to_string_pretty(&v).expect("error serializes") + "\n"
}

fn compute<T>(r: eqclass::Result<T>) -> Result<T, Failure> {
    r.map_err(Failure::compute)
}

fn y_value(job: &JobSpec) -> Result<Option<Cyclotomic>, Failure> {
    job.y_value
        .as_deref()
        .map(|s| {
            parse_rational(s)
                .map(Cyclotomic::from_rational)
                .ok_or_else(|| Failure::input("usage", format!("`{s}` is not a rational value for y")))
        })
        .transpose()
}

fn source(job: &JobSpec) -> Result<Source, Failure> {
    let spec = job
        .input
        .as_ref()
        .ok_or_else(|| Failure::input("usage", format!("`{}` needs an input", job.command.name())))?;
    build(spec, job.command, conductor_max()?)
}

fn elements(d: &LocalizationDatum, element: Option<&str>) -> Result<Vec<String>, Failure> {
    match element {
        None | Some("all") => Ok(d.group().elements().to_vec()),
        Some(g) if d.group().index_of(g).is_ok() => Ok(vec![g.to_string()]),
        Some(g) => Err(Failure::rejected(Error::UnknownElement(g.to_string()))),
    }
}

fn twist(job: &JobSpec, d: &LocalizationDatum) -> Result<Option<BTreeMap<String, Vec<SplitBundle>>>, Failure> {
    let Some(path) = &job.twist else { return Ok(None) };
    let w: TwistWire = read_json(path)?;
    decode_twist(d, &w).map(Some).map_err(Failure::rejected)
}

fn twist_for<'a>(
    t: &'a Option<BTreeMap<String, Vec<SplitBundle>>>,
    g: &str,
) -> Result<Option<&'a [SplitBundle]>, Failure> {
    match t {
        None => Ok(None),
        Some(m) => m
            .get(g)
            .map(|v| Some(v.as_slice()))
            .ok_or_else(|| Failure::input("invalid-datum", format!("twist file has no bundles for element `{g}`"))),
    }
}

/// Adds the value at `y` when requested.
fn with_y(
    v: &YCoeff,
    y: &Option<Cyclotomic>,
    json: &mut Value,
    pretty: &mut Vec<String>,
    label: &str,
) -> Result<(), Failure> {
    if let Some(y0) = y {
        let at = compute(v.specialize(y0))?;
        json["at_y"] = json!({"y": y0.to_string(), "value": render::cyclotomic(&at)});
        pretty.extend(render::pretty_pair(
            &format!("{label} at y = {y0}"),
            &at.to_string(),
            &render::approx_cyclotomic(&at),
        ));
    }
    Ok(())
}

fn genus(job: &JobSpec) -> Result<Report, Failure> {
    let d = source(job)?.datum()?;
    let els = elements(&d, job.element.as_deref())?;
    let tw = twist(job, &d)?;
    let y = y_value(job)?;
    let mut rows = Vec::new();
    let mut pretty = Vec::new();
    for g in &els {
        let chi = compute(equivariant_chi_y(&d, g, twist_for(&tw, g)?))?;
        let label = format!("chi_y({g})");
        pretty.extend(render::pretty_pair(
            &label,
            &chi.to_string(),
            &render::approx_ycoeff(&chi),
        ));
        let mut row = json!({"element": g, "chi_y": render::ycoeff(&chi)});
        with_y(&chi, &y, &mut row, &mut pretty, &label)?;
        rows.push(row);
    }
    let json = json!({"command": "genus", "conductor": d.conductor(), "twisted": tw.is_some(), "elements": rows});
    Ok(Report::ok(json, pretty))
}

fn class(job: &JobSpec) -> Result<Report, Failure> {
    let d = source(job)?.datum()?;
    let els = elements(&d, job.element.as_deref())?;
    let tw = twist(job, &d)?;
    let mut rows = Vec::new();
    let mut pretty = Vec::new();
    for g in &els {
        let bundles = twist_for(&tw, g)?;
        let mut comps = Vec::new();
        let mut total = YCoeff::zero();
        for (i, c) in compute(d.components(g))?.iter().enumerate() {
            let s = match bundles {
                Some(b) => compute(twisted_class(c, &b[i], job.normalized))?,
                None => compute(atiyah_singer_class(c, job.normalized))?,
            };
            let degree = s.integrate();
            total = &total + &degree;
            pretty.extend(render::pretty_pair(
                &format!("{g} / {}", c.label()),
                &s.to_string(),
                &render::approx_series(&s),
            ));
            comps.push(json!({
                "label": c.label(),
                "dim": c.dim(),
                "series": render::series(&s),
                "degree": render::ycoeff(&degree),
            }));
        }
        pretty.extend(render::pretty_pair(
            &format!("{g} degree"),
            &total.to_string(),
            &render::approx_ycoeff(&total),
        ));
        rows.push(json!({"element": g, "components": comps, "degree": render::ycoeff(&total)}));
    }
    let json = json!({
        "command": "class",
        "conductor": d.conductor(),
        "normalized": job.normalized,
        "twisted": tw.is_some(),
        "elements": rows,
    });
    Ok(Report::ok(json, pretty))
}

fn quotient_genus(job: &JobSpec) -> Result<Report, Failure> {
    let y = y_value(job)?;
    let chi = match source(job)? {
        Source::Wproj(w) => compute(chi_y_quotient_wproj(&w))?,
        s => compute(chi_y_quotient(&s.datum()?))?,
    };
    let mut pretty = render::pretty_pair("chi_y(X/G)", &chi.to_string(), &render::approx_ycoeff(&chi));
    let mut json = json!({"command": "quotient-genus", "chi_y": render::ycoeff(&chi)});
    with_y(&chi, &y, &mut json, &mut pretty, "chi_y(X/G)")?;
    Ok(Report::ok(json, pretty))
}

fn wproj(job: &JobSpec) -> Result<Report, Failure> {
    let Source::Wproj(w) = source(job)? else {
        return Err(Failure::input(
            "usage",
            "`wproj-class` needs weighted projective weights",
        ));
    };
    let y = y_value(job)?;
    let c = compute(wproj_class(&w, job.normalized))?;
    let degree = c.degree();
    let contributing: Vec<String> = c.contributing.iter().map(|a| a.to_string()).collect();
    let mut pretty = render::pretty_pair("pi^* class", &c.series.to_string(), &render::approx_series(&c.series));
    pretty.extend(render::pretty_pair(
        "degree",
        &degree.to_string(),
        &render::approx_ycoeff(&degree),
    ));
    pretty.push(format!("contributing angles: {}", contributing.join(", ")));
    let mut json = json!({
        "command": "wproj-class",
        "weights": w,
        "normalized": c.normalized,
        "cover_degree": c.cover_degree,
        "contributing": contributing,
        "series": render::series(&c.series),
        "degree": render::ycoeff(&degree),
    });
    with_y(&degree, &y, &mut json, &mut pretty, "degree")?;
    Ok(Report::ok(json, pretty))
}

fn defect(job: &JobSpec) -> Result<Report, Failure> {
    let Source::Defect { datum, group_order } = source(job)? else {
        return Err(Failure::input("usage", "`defect` needs a defect datum"));
    };
    let y = y_value(job)?;
    let v = compute(defect_sum(&datum, group_order))?;
    let mut pretty = render::pretty_pair("defect", &v.to_string(), &render::approx_ycoeff(&v));
    let mut json = json!({"command": "defect", "group_order": group_order, "defect": render::ycoeff(&v)});
    with_y(&v, &y, &mut json, &mut pretty, "defect")?;
    Ok(Report::ok(json, pretty))
}

fn verify(job: &JobSpec) -> Result<Report, Failure> {
    let known = suite_names();
    let only: Vec<String> = job.suite.iter().filter(|s| s.as_str() != "all").cloned().collect();
    if let Some(bad) = only.iter().find(|s| !known.contains(&s.as_str())) {
        return Err(Failure::input(
            "usage",
            format!("unknown check `{bad}`; known checks: {}", known.join(", ")),
        ));
    }
    let outcomes = run_suite(&only);
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let mut pretty = Vec::new();
    let mut rows = Vec::new();
    for o in &outcomes {
        // timings go to stderr so reports stay reproducible
        eprintln!("{:>2} {} took {} ms", o.id, o.name, o.millis);
        let status = if o.passed { "PASS" } else { "FAIL" };
        let mut line = format!("{status} {:>2} {}", o.id, o.name);
        if !o.passed {
            line.push_str(&format!(": {}", o.detail));
        }
        pretty.push(line);
        rows.push(json!({"id": o.id, "name": o.name, "passed": o.passed, "detail": o.detail}));
    }
    pretty.push(format!(
        "{} of {} checks passed",
        outcomes.len() - failed,
        outcomes.len()
    ));
    let json = json!({"command": "verify", "passed": failed == 0, "checks": rows});
    Ok(Report {
        json,
        pretty,
        code: if failed == 0 { 0 } else { 1 },
        raw: None,
    })
}

fn specialize(job: &JobSpec) -> Result<Report, Failure> {
    let d = source(job)?.datum()?;
    let els = elements(&d, job.element.as_deref())?;
    let y = y_value(job)?;
    let mut rows = Vec::new();
    let mut pretty = Vec::new();
    for g in &els {
        match &y {
            Some(y0) => {
                let v = compute(compute(equivariant_chi_y(&d, g, None))?.specialize(y0))?;
                pretty.extend(render::pretty_pair(
                    &format!("chi_{y0}({g})"),
                    &v.to_string(),
                    &render::approx_cyclotomic(&v),
                ));
                rows.push(json!({"element": g, "y": y0.to_string(), "value": render::cyclotomic(&v)}));
            }
            None => {
                let inv = compute(specialized_invariants(&d, g))?;
                for (name, v) in [
                    ("euler", &inv.euler),
                    ("todd", &inv.todd),
                    ("signature", &inv.signature),
                ] {
                    pretty.extend(render::pretty_pair(
                        &format!("{name}({g})"),
                        &v.to_string(),
                        &render::approx_cyclotomic(v),
                    ));
                }
                rows.push(json!({
                    "element": g,
                    "euler": render::cyclotomic(&inv.euler),
                    "todd": render::cyclotomic(&inv.todd),
                    "signature": render::cyclotomic(&inv.signature),
                }));
            }
        }
    }
    Ok(Report::ok(json!({"command": "specialize", "elements": rows}), pretty))
}

fn datum(job: &JobSpec) -> Result<Report, Failure> {
    let d = source(job)?.datum()?;
    let text = datum_to_json(&d);
    let json: Value = serde_json::from_str(&text).expect("datum JSON parses");
    let mut r = Report::ok(json, Vec::new());
    r.raw = Some(text);
    Ok(r)
}

pub fn run(job: &JobSpec) -> Result<Report, Failure> {
    match job.command {
        CommandKind::Genus => genus(job),
        CommandKind::Class => class(job),
        CommandKind::QuotientGenus => quotient_genus(job),
        CommandKind::WprojClass => wproj(job),
        CommandKind::Defect => defect(job),
        CommandKind::Verify => verify(job),
        CommandKind::Specialize => specialize(job),
        CommandKind::Datum => datum(job),
    }
}
