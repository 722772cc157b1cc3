//! SINR- and rate-region boundaries via profile sweeps.
//!
//! A SINR profile `λ` asks for the largest `γ` with `γ_k ≥ λ_k γ`; a rate
//! profile `α` asks for the largest `r` with `r_k ≥ α_k r`. Above the
//! threshold `γ̄` the rate is increasing in SINR, so both sweeps trace the same
//! boundary; points where some user sits below `γ̄` are flagged and left out
//! of comparisons.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::architectures::Architecture;
use crate::fbl::{fbl_rate, rate_inverse, FblParams};
use crate::linalg::CMatrix;
use crate::optimizer::{ao_solve, ao_solve_from, check_simplex, AoOutcome, BeamformerSet, OptimizerConfig, OutcomeStatus, Setup};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    /// `λ` for SINR-profile points, `α` for rate-profile points.
    pub weights: Vec<f64>,
    pub sinrs: Vec<f64>,
    /// Rates in nats, clamped at zero.
    pub rates: Vec<f64>,
    pub raw_rates: Vec<f64>,
    /// `γ` for SINR profiles, `r` for rate profiles.
    pub objective: f64,
    pub status: OutcomeStatus,
    pub outer_iterations: usize,
    /// Some user is below the SINR threshold.
    pub below_threshold: bool,
    /// Solves spent on this point.
    pub solves: usize,
}

impl RegionPoint {
    fn from_outcome(weights: Vec<f64>, out: &AoOutcome, objective: f64, fbl: &FblParams, solves: usize) -> Self {
        let raw_rates: Vec<f64> = out.sinrs.iter().map(|&g| fbl_rate(g, fbl)).collect();
        Self {
            weights,
            rates: raw_rates.iter().map(|r| r.max(0.0)).collect(),
            raw_rates,
            sinrs: out.sinrs.clone(),
            objective,
            status: out.status,
            outer_iterations: out.outer_iterations,
            below_threshold: out.sinrs.iter().any(|&g| g < fbl.gamma_bar),
            solves,
        }
    }
}

/// Max-min solve with SINR profile `λ`.
pub fn sinr_region_point(
    lambda: &[f64],
    setup: &Setup,
    architecture: Architecture,
    config: &OptimizerConfig,
    fbl: &FblParams,
) -> Result<RegionPoint> {
    check_simplex(lambda, setup.channels.num_users())?;
    let cfg = OptimizerConfig {
        weights: Some(lambda.to_vec()),
        ..config.clone()
    };
    let out = ao_solve(setup, architecture, &cfg)?;
    Ok(RegionPoint::from_outcome(lambda.to_vec(), &out, out.objective, fbl, 1))
}

/// Interior simplex grid: for `K = 2`, `λ_1 = i/(L+1)` for `i = 1..=L`;
/// for `K = 3`, all positive integer triples summing to `L + 1`, scaled.
pub fn simplex_grid(k: usize, l: usize) -> Result<Vec<Vec<f64>>> {
    if l == 0 {
        return Err(Error::invalid("grid", "at least one point per dimension"));
    }
    let d = (l + 1) as f64;
    match k {
        1 => Ok(vec![vec![1.0]]),
        2 => Ok((1..=l).map(|i| vec![i as f64 / d, (l + 1 - i) as f64 / d]).collect()),
        3 => {
            let mut out = Vec::new();
            for i in 1..=l {
                for j in 1..=(l - i) {
                    let r = l + 1 - i - j;
                    if r >= 1 {
                        out.push(vec![i as f64 / d, j as f64 / d, r as f64 / d]);
                    }
                }
            }
            Ok(out)
        }
        _ => Err(Error::invalid("num_users", "boundary gridding supports K = 2 or 3")),
    }
}

/// Points of `points` not dominated by any other point, in input order.
pub fn pareto_filter(points: Vec<RegionPoint>) -> Vec<RegionPoint> {
    let dominated = |a: &RegionPoint, b: &RegionPoint| {
        b.rates.iter().zip(&a.rates).all(|(x, y)| x >= y) && b.rates.iter().zip(&a.rates).any(|(x, y)| x > y)
    };
    let keep: Vec<bool> = points
        .iter()
        .map(|p| !points.iter().any(|q| dominated(p, q)))
        .collect();
    points.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect()
}

/// Per-point initialization seed; the random surface is part of the
/// channel, so it keeps one draw across the sweep.
fn point_seed(seed: u64, architecture: Architecture, i: usize) -> u64 {
    if architecture == Architecture::Random {
        seed
    } else {
        seed.wrapping_add(i as u64)
    }
}

/// SINR-profile sweep mapped through the rate function, Pareto-filtered.
///
/// Grid points are solved in parallel, each with its own initialization seed
/// except under the random surface.
pub fn rate_region_boundary(
    setup: &Setup,
    architecture: Architecture,
    grid: usize,
    config: &OptimizerConfig,
    fbl: &FblParams,
) -> Result<Vec<RegionPoint>> {
    let profiles = simplex_grid(setup.channels.num_users(), grid)?;
    let points = profiles
        .par_iter()
        .enumerate()
        .map(|(i, lambda)| {
            let cfg = OptimizerConfig {
                seed: point_seed(config.seed, architecture, i),
                ..config.clone()
            };
            sinr_region_point(lambda, setup, architecture, &cfg, fbl)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(pareto_filter(points))
}

/// Largest `r` with `r_k ≥ α_k r`, by bisection over SINR-profile solves.
///
/// A candidate `r` maps to SINR targets `γ_k* = r⁻¹(α_k r)`; it is feasible
/// when the max-min solve with `λ_k = γ_k* / Σ_j γ_j*` reaches `Σ_j γ_j*`.
/// Each solve starts from the best feasible point found so far.
pub fn rate_profile_point(
    alpha: &[f64],
    setup: &Setup,
    architecture: Architecture,
    config: &OptimizerConfig,
    fbl: &FblParams,
) -> Result<RegionPoint> {
    let k = setup.channels.num_users();
    check_simplex(alpha, k)?;
    let cfg = OptimizerConfig {
        weights: Some(alpha.to_vec()),
        ..config.clone()
    };
    let floor = fbl_rate(fbl.gamma_bar, fbl);
    // α_k r must not fall below the rate at γ̄
    let r_min = alpha.iter().map(|a| floor / a).fold(f64::NEG_INFINITY, f64::max).max(0.0);
    let achieved_r = |out: &AoOutcome| {
        out.sinrs
            .iter()
            .zip(alpha)
            .map(|(&g, a)| fbl_rate(g, fbl) / a)
            .fold(f64::INFINITY, f64::min)
    };
    let mut solves = 1;
    let first = ao_solve(setup, architecture, &cfg)?;
    let mut best = first.clone();
    let mut lo = achieved_r(&first).max(r_min);
    if first.is_infeasible() || first.sinrs.iter().any(|&g| g < fbl.gamma_bar) {
        return Ok(RegionPoint::from_outcome(alpha.to_vec(), &first, achieved_r(&first), fbl, solves));
    }
    let test = |r: f64, start: &AoOutcome| -> Result<Option<AoOutcome>> {
        let targets = alpha
            .iter()
            .map(|a| rate_inverse(a * r, fbl))
            .collect::<Result<Vec<f64>>>()?;
        let total: f64 = targets.iter().sum();
        let lambda: Vec<f64> = targets.iter().map(|t| t / total).collect();
        let c = OptimizerConfig {
            weights: Some(lambda),
            ..config.clone()
        };
        let out = warm(setup, architecture, &c, &start.beams, &start.ris.phi)?;
        let ok = !out.is_infeasible() && out.sinrs.iter().zip(&targets).all(|(g, t)| *g >= *t * (1.0 - 1e-9));
        Ok(ok.then_some(out))
    };
    let mut hi = f64::INFINITY;
    let mut step = lo.max(1e-3);
    while hi.is_infinite() {
        let cand = lo + step;
        solves += 1;
        match test(cand, &best)? {
            Some(out) => {
                lo = achieved_r(&out).max(cand);
                best = out;
                step *= 2.0;
            }
            None => hi = cand,
        }
        if solves > 40 {
            break;
        }
    }
    while hi.is_finite() && hi - lo > 1e-3 * lo.abs().max(1e-9) && solves < 60 {
        let mid = 0.5 * (lo + hi);
        solves += 1;
        match test(mid, &best)? {
            Some(out) => {
                lo = achieved_r(&out).max(mid).min(hi);
                best = out;
            }
            None => hi = mid,
        }
    }
    Ok(RegionPoint::from_outcome(alpha.to_vec(), &best, lo, fbl, solves))
}

fn warm(
    setup: &Setup,
    architecture: Architecture,
    config: &OptimizerConfig,
    beams: &BeamformerSet,
    phi: &CMatrix,
) -> Result<AoOutcome> {
    ao_solve_from(setup, architecture, config, beams.clone(), phi.clone())
}

/// Rate-profile sweep over the same simplex grid, Pareto-filtered.
pub fn rate_profile_boundary(
    setup: &Setup,
    architecture: Architecture,
    grid: usize,
    config: &OptimizerConfig,
    fbl: &FblParams,
) -> Result<Vec<RegionPoint>> {
    let profiles = simplex_grid(setup.channels.num_users(), grid)?;
    let points = profiles
        .par_iter()
        .enumerate()
        .map(|(i, alpha)| {
            let cfg = OptimizerConfig {
                seed: point_seed(config.seed, architecture, i),
                ..config.clone()
            };
            rate_profile_point(alpha, setup, architecture, &cfg, fbl)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(pareto_filter(points))
}

fn segment_distance(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let ap: Vec<f64> = a.iter().zip(p).map(|(x, y)| y - x).collect();
    let len2: f64 = ab.iter().map(|v| v * v).sum();
    let t = if len2 > 0.0 {
        (ab.iter().zip(&ap).map(|(x, y)| x * y).sum::<f64>() / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    ab.iter()
        .zip(&ap)
        .map(|(d, v)| (v - t * d).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn to_polyline(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a[0].total_cmp(&b[0]));
    sorted
}

fn point_to_polyline(p: &[f64], line: &[Vec<f64>]) -> f64 {
    match line.len() {
        0 => f64::INFINITY,
        1 => p.iter().zip(&line[0]).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt(),
        _ => line
            .windows(2)
            .map(|w| segment_distance(p, &w[0], &w[1]))
            .fold(f64::INFINITY, f64::min),
    }
}

fn angle(p: &[f64]) -> f64 {
    p[1].atan2(p[0])
}

fn within_span(points: &[Vec<f64>], lo: f64, hi: f64) -> Vec<Vec<f64>> {
    points
        .iter()
        .filter(|p| (lo..=hi).contains(&angle(p)))
        .cloned()
        .collect()
}

/// [`boundary_distance`] restricted to the common angular span of the two
/// boundaries, so that arcs only one sweep reaches do not count.
pub fn boundary_distance_on_overlap(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let span = |s: &[Vec<f64>]| {
        s.iter()
            .map(|p| angle(p))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), t| (l.min(t), h.max(t)))
    };
    let (la, ha) = span(a);
    let (lb, hb) = span(b);
    let (lo, hi) = (la.max(lb), ha.min(hb));
    if lo > hi {
        return f64::INFINITY;
    }
    let a_in = within_span(a, lo, hi);
    let b_in = within_span(b, lo, hi);
    let la = to_polyline(a);
    let lb = to_polyline(b);
    let d1 = a_in.iter().map(|p| point_to_polyline(p, &lb)).fold(0.0f64, f64::max);
    let d2 = b_in.iter().map(|p| point_to_polyline(p, &la)).fold(0.0f64, f64::max);
    let scale = a_in
        .iter()
        .chain(&b_in)
        .flat_map(|p| p.iter().cloned())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    d1.max(d2) / scale
}

/// Symmetric Hausdorff distance between two two-dimensional boundaries, each
/// read as the polyline through its points sorted by the first coordinate,
/// divided by the largest coordinate in either set.
pub fn boundary_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let la = to_polyline(a);
    let lb = to_polyline(b);
    let d1 = a.iter().map(|p| point_to_polyline(p, &lb)).fold(0.0f64, f64::max);
    let d2 = b.iter().map(|p| point_to_polyline(p, &la)).fold(0.0f64, f64::max);
    let scale = a
        .iter()
        .chain(b)
        .flat_map(|p| p.iter().cloned())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    d1.max(d2) / scale
}

/// CSV with `weight_k`, `sinr_k` and `rate_k` columns followed by the objective and threshold flag.
pub fn write_region_csv<W: Write>(points: &[RegionPoint], out: W) -> Result<()> {
    let k = points.first().map_or(0, |p| p.weights.len());
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = Vec::new();
    for prefix in ["weight", "sinr", "rate_nats"] {
        header.extend((1..=k).map(|i| format!("{prefix}_{i}")));
    }
    header.push("objective".into());
    header.push("below_threshold".into());
    w.write_record(&header)?;
    for p in points {
        let mut row: Vec<String> = Vec::new();
        row.extend(p.weights.iter().map(|v| v.to_string()));
        row.extend(p.sinrs.iter().map(|v| v.to_string()));
        row.extend(p.rates.iter().map(|v| v.to_string()));
        row.push(p.objective.to_string());
        row.push(p.below_threshold.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Two-user rate boundary as an SVG scatter with a connecting polyline.
pub fn region_svg(points: &[RegionPoint], title: &str) -> String {
    let pts: Vec<(f64, f64)> = to_polyline(
        &points
            .iter()
            .filter(|p| p.rates.len() >= 2)
            .map(|p| vec![p.rates[0], p.rates[1]])
            .collect::<Vec<_>>(),
    )
    .into_iter()
    .map(|v| (v[0], v[1]))
    .collect();
    let xmax = pts.iter().map(|p| p.0).fold(0.0f64, f64::max).max(1e-9) * 1.05;
    let ymax = pts.iter().map(|p| p.1).fold(0.0f64, f64::max).max(1e-9) * 1.05;
    let (w, h, m) = (480.0, 400.0, 50.0);
    let sx = |x: f64| m + x / xmax * (w - 2.0 * m);
    let sy = |y: f64| h - m - y / ymax * (h - 2.0 * m);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n\
         <line x1=\"{m}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{}\" x2=\"{m}\" y2=\"{m}\" stroke=\"black\"/>\n\
         <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">r1 [nats] (max {:.3})</text>\n\
         <text x=\"15\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 15 {})\">r2 [nats] (max {:.3})</text>\n",
        w / 2.0,
        xml_escape(title),
        h - m,
        w - m,
        h - m,
        h - m,
        w / 2.0,
        h - 15.0,
        xmax / 1.05,
        h / 2.0,
        h / 2.0,
        ymax / 1.05,
    );
    let poly: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
    s.push_str(&format!(
        "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        poly.join(" ")
    ));
    for &(x, y) in &pts {
        s.push_str(&format!("<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"steelblue\"/>\n", sx(x), sy(y)));
    }
    s.push_str("</svg>\n");
    s
}

pub(crate) fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
