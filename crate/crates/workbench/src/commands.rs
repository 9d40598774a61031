//! Subcommand implementations. Each fills in a [`Report`] and returns
//! whether the run succeeded; domain errors are returned to the caller.

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use delta_core::cover::{
    cover_search, delta_large_from_cofinite, maximal_almost_disjoint, verify_cover, CoverSearch, MaximalOutcome,
};
use delta_core::delta::{
    delta_closed_form, delta_exact, delta_stabilized, delta_window, delta_window_within, handoff, iterate_delta,
    IterMode,
};
use delta_core::partition::find_delta_large_part;
use delta_core::sequence::{audit, build_subset, BuildConfig};
use delta_core::taxonomy::{
    almost_p_small_witness, nabla_thin_trace, non_sparse_propagation, sparse_witness_search, weakly_p_small_witness,
    Search,
};
use delta_core::{default_window, parse_set_spec, Element, Error, Group, Periodic, SetRepr, Window};

use crate::cli::{self, BuildArgs, ClassifyArgs, CoverArgs, DeltaArgs, DeltaLargeArgs, IterateArgs, PartitionArgs};
use crate::exec::Threads;
use crate::report::{self, Report};

pub struct Ctx {
    pub window: Option<u64>,
    pub threshold: Option<u64>,
    pub seed: Option<u64>,
    pub exec: Threads,
}

impl Ctx {
    fn window(&self, r: &mut Report, group: Group) -> Window {
        let w = self.window.map(Window).unwrap_or_else(|| default_window(group));
        r.sourced("window", w.radius(), self.window.is_some());
        w
    }

    fn threshold(&self, r: &mut Report) -> u64 {
        let t = self.threshold.unwrap_or(delta_core::DEFAULT_THRESHOLD);
        r.sourced("threshold", t, self.threshold.is_some());
        t
    }
}

/// Splits on `sep` outside brackets.
pub fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(text[start..i].trim());
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out
}

/// Elements written as `g,h,…`, optionally in braces.
pub fn parse_elements(text: &str) -> Result<Vec<Element>, Error> {
    let t = text.trim();
    let t = t
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .unwrap_or(t)
        .trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    split_top(t, ',').into_iter().map(str::parse).collect()
}

fn parse_set(r: &mut Report, key: &str, text: &str) -> Result<SetRepr, Error> {
    let s = parse_set_spec(text)?;
    r.param(key, report::set(&s));
    Ok(s)
}

pub fn delta(ctx: &Ctx, a: &DeltaArgs, r: &mut Report) -> Result<bool, Error> {
    let s = parse_set(r, "set", &a.set)?;
    let mode = match a.mode {
        Some(m) => m,
        None if delta_closed_form(&s)?.is_some() => cli::DeltaMode::Exact,
        None => cli::DeltaMode::Window,
    };
    r.param("mode", format!("{mode:?}").to_lowercase());
    match mode {
        cli::DeltaMode::Exact => {
            let d = match s.exact() {
                Some(p) => SetRepr::Periodic(delta_exact(&p)),
                None => delta_closed_form(&s)?.ok_or(Error::NotExact)?,
            };
            r.result = json!({ "delta": report::set(&d), "verdict": "proven" });
        }
        cli::DeltaMode::Window | cli::DeltaMode::Stabilized => {
            let w = ctx.window(r, s.group());
            let t = ctx.threshold(r);
            let region = a.region.map(Window).unwrap_or(w);
            r.param("region", region.radius());
            let ev = if mode == cli::DeltaMode::Window {
                delta_window_within(&s, w, t, region, &ctx.exec)?
            } else {
                delta_stabilized(&s, w, t, region, &ctx.exec)?
            };
            r.result = json!({ "delta": report::evidence(&ev) });
        }
        cli::DeltaMode::Handoff => {
            let w = ctx.window(r, s.group());
            let t = ctx.threshold(r);
            let (ev, closed) = handoff(&s, w, t, &ctx.exec)?;
            r.result = json!({ "delta": report::set(&closed), "verdict": "proven" });
            r.certificates = json!([{ "kind": "handoff", "evidence": report::evidence(&ev) }]);
        }
    }
    Ok(true)
}

pub fn iterate(ctx: &Ctx, a: &IterateArgs, r: &mut Report) -> Result<bool, Error> {
    let s = parse_set(r, "set", &a.set)?;
    r.param("steps", a.steps);
    let mode = match a.mode {
        Some(m) => m,
        None if s.is_exact() => cli::IterMode::Exact,
        None if delta_closed_form(&s)?.is_some() => cli::IterMode::Handoff,
        None => cli::IterMode::Window,
    };
    r.param("mode", format!("{mode:?}").to_lowercase());
    let mode = match mode {
        cli::IterMode::Exact => IterMode::Exact,
        cli::IterMode::Window => IterMode::Window {
            window: ctx.window(r, s.group()),
            threshold: ctx.threshold(r),
        },
        cli::IterMode::Handoff => IterMode::Handoff {
            window: ctx.window(r, s.group()),
            threshold: ctx.threshold(r),
        },
    };
    let t = iterate_delta(&s, a.steps, mode, &ctx.exec)?;
    r.result = json!({ "trace": report::trace(&t) });
    Ok(true)
}

pub fn cover(ctx: &Ctx, a: &CoverArgs, r: &mut Report) -> Result<bool, Error> {
    let s = parse_set(r, "set", &a.set)?;
    r.param("max_size", a.max_size);
    let w = ctx.window(r, s.group());
    match cover_search(&s, a.max_size, w)? {
        CoverSearch::Found(c) => {
            r.result = json!({
                "found": true,
                "shifts": report::elems(&c.shifts),
                "residual": report::elems(&c.residual),
                "verdict": report::verdict(c.verdict),
            });
            let replay = verify_cover(&c.shifts, &s, w)?;
            r.certificates = json!([{ "kind": "cover", "check": report::cover_check(&replay) }]);
        }
        CoverSearch::NotFound { complete, verdict } => {
            r.result = json!({ "found": false, "complete": complete, "verdict": report::verdict(verdict) });
        }
    }
    Ok(true)
}

pub fn delta_large(ctx: &Ctx, a: &DeltaLargeArgs, r: &mut Report) -> Result<bool, Error> {
    let s = parse_set(r, "set", &a.set)?;
    r.param("via", format!("{:?}", a.via).to_lowercase());
    let w = ctx.window(r, s.group());
    let t = ctx.threshold(r);
    match a.via {
        cli::Via::Cofinite => {
            let shifts = match &a.cover {
                Some(text) => parse_elements(text)?,
                None => match cover_search(&s, 8, w)? {
                    CoverSearch::Found(c) => c.shifts,
                    CoverSearch::NotFound { complete, verdict } => {
                        r.result = json!({
                            "delta_large": Value::Null,
                            "cover_found": false,
                            "complete": complete,
                            "verdict": report::verdict(verdict),
                        });
                        return Ok(false);
                    }
                },
            };
            r.param("cover", report::elems(&shifts));
            let check = verify_cover(&shifts, &s, w)?;
            let cert = delta_large_from_cofinite(&shifts, &s, w, t)?;
            r.result = json!({ "delta_large": true, "cert": report::delta_large(&cert) });
            r.certificates = json!([{ "kind": "cover", "check": report::cover_check(&check) }]);
        }
        cli::Via::Maximal => {
            r.param("cap", a.cap);
            match maximal_almost_disjoint(&s, w, t, a.cap)? {
                MaximalOutcome::Cert(cert) => {
                    r.result = json!({ "delta_large": true, "cert": report::delta_large(&cert) });
                }
                MaximalOutcome::Exhausted { family, verdict } => {
                    r.result = json!({
                        "delta_large": Value::Null,
                        "almost_disjoint_family": report::elems(&family),
                        "verdict": report::verdict(verdict),
                    });
                }
            }
        }
    }
    Ok(true)
}

fn region(group: Group, w: Window) -> Result<Vec<Element>, Error> {
    match group {
        Group::Z => {
            let r = w.radius().min(delta_core::set::MAX_BALL as u64) as i64;
            Ok((-r..=r).map(Element::Int).collect())
        }
        g => {
            if g.ball_size(w.radius()) > delta_core::set::MAX_BALL {
                return Err(Error::WindowTooLarge(w.radius()));
            }
            Ok(g.ball(w.radius()))
        }
    }
}

const SAMPLE: usize = 16;

pub fn partition(ctx: &Ctx, a: &PartitionArgs, r: &mut Report) -> Result<bool, Error> {
    let x = parse_set(r, "cover_set", &a.cover_set)?;
    let parts = split_top(&a.parts, ';')
        .into_iter()
        .map(parse_set_spec)
        .collect::<Result<Vec<_>, _>>()?;
    r.param("parts", Value::Array(parts.iter().map(report::set).collect()));
    let w = ctx.window(r, x.group());
    let t = ctx.threshold(r);
    if a.check_only {
        r.param("check_only", true);
        return partition_check(ctx, &x, &parts, w, t, r);
    }
    let shifts = parse_elements(a.cover.as_deref().unwrap_or_default())?;
    r.param("cover", report::elems(&shifts));
    let cert = find_delta_large_part(&x, &shifts, &parts, w, t)?;
    let part = &parts[cert.index - 1];
    let mut certs = Vec::new();
    if let Some(d) = delta_closed_form(part)? {
        let check = verify_cover(&cert.shifts, &d, w)?;
        certs.push(json!({ "kind": "delta-cover", "part": cert.index, "check": report::cover_check(&check) }));
    }
    r.result = json!({ "cert": report::partition(&cert) });
    r.certificates = Value::Array(certs);
    Ok(true)
}

/// Exact partition property on the window and per-part Δ-evidence.
fn partition_check(
    ctx: &Ctx,
    x: &SetRepr,
    parts: &[SetRepr],
    w: Window,
    t: u64,
    r: &mut Report,
) -> Result<bool, Error> {
    let mut once = 0usize;
    let (mut uncovered, mut overlaps, mut outside) = (Vec::new(), Vec::new(), Vec::new());
    let mut sizes = vec![0usize; parts.len()];
    for g in region(x.group(), w)? {
        let hits: Vec<usize> = (0..parts.len()).filter(|&i| parts[i].contains(&g)).collect();
        for &i in &hits {
            sizes[i] += 1;
        }
        match (x.contains(&g), hits.len()) {
            (true, 1) => once += 1,
            (true, 0) => uncovered.push(g),
            (false, 0) => {}
            (false, _) => outside.push(g),
            (true, _) => overlaps.push(g),
        }
    }
    let exact = uncovered.is_empty() && overlaps.is_empty() && outside.is_empty();
    let sample = |v: &[Element]| report::elems(&v[..v.len().min(SAMPLE)]);
    let mut per_part = Vec::new();
    for (p, size) in parts.iter().zip(&sizes) {
        let ev = delta_window(p, w, t, &ctx.exec)?;
        per_part.push(json!({
            "set": report::set(p),
            "members_in_window": size,
            "delta": {
                "size": ev.members.len(),
                "contains_identity": ev.contains(&p.group().identity()),
                "verdict": report::verdict(ev.verdict()),
            },
        }));
    }
    r.result = json!({
        "partition": {
            "exact": exact,
            "covered_once": once,
            "uncovered": { "count": uncovered.len(), "sample": sample(&uncovered) },
            "overlaps": { "count": overlaps.len(), "sample": sample(&overlaps) },
            "outside": { "count": outside.len(), "sample": sample(&outside) },
        },
        "parts": per_part,
    });
    Ok(exact)
}

pub fn build_y(ctx: &Ctx, a: &BuildArgs, r: &mut Report) -> Result<bool, Error> {
    let ambient = parse_set(r, "ambient", &a.ambient)?;
    let target = parse_set(r, "target", &a.target)?;
    r.param("steps", a.steps);
    let w = ctx.window(r, ambient.group());
    let mut cfg = BuildConfig::new(a.steps, w);
    cfg.threshold = ctx.threshold(r);
    let state = build_subset(&ambient, &target, &cfg)?;
    let (audit_v, ok) = match audit(&state) {
        Ok(rep) => (report::audit(&rep), true),
        Err(Error::AuditFailure { at, reason }) => (json!({ "status": "failed", "at": at, "reason": reason }), false),
        Err(e) => return Err(e),
    };
    r.result = json!({ "build": report::build(&state) });
    r.certificates = json!([{ "kind": "audit", "audit": audit_v }]);
    Ok(ok)
}

fn classify_one(
    ctx: &Ctx,
    a: &ClassifyArgs,
    s: &SetRepr,
    x: Option<&SetRepr>,
    w: Window,
    t: u64,
) -> Result<Value, Error> {
    let mut out = serde_json::Map::new();
    for prop in &a.props {
        let v = match prop {
            cli::Prop::Sparse => {
                let x = match x {
                    Some(x) => x.clone(),
                    None if s.group() == Group::Z => SetRepr::Periodic(Periodic::integers()),
                    None => return Err(Error::InvalidArgument("sparseness outside Z needs --x")),
                };
                let found = sparse_witness_search(s, &x, a.max_f, w)?;
                let mut v = json!({ "x": report::set(&x), "search": report::search(&found) });
                if let Search::NotFound { verdict } = found {
                    if verdict.is_exact() {
                        let p = non_sparse_propagation(s, &x, w, t, &ctx.exec)?;
                        v["propagation"] = report::propagation(&p);
                    }
                }
                v
            }
            cli::Prop::NablaThin => {
                let mode = if s.is_exact() || matches!(s, SetRepr::Finite(_)) {
                    IterMode::Exact
                } else if delta_closed_form(s)?.is_some() {
                    IterMode::Handoff {
                        window: w,
                        threshold: t,
                    }
                } else {
                    IterMode::Window {
                        window: w,
                        threshold: t,
                    }
                };
                report::thin(&nabla_thin_trace(s, a.iterations, mode, &ctx.exec)?)
            }
            cli::Prop::AlmostPSmall => report::search(&almost_p_small_witness(s, a.k, t, w)?),
            cli::Prop::WeaklyPSmall => report::search(&weakly_p_small_witness(s, a.n, w)?),
        };
        let key = match prop {
            cli::Prop::Sparse => "sparse",
            cli::Prop::NablaThin => "nabla_thin",
            cli::Prop::AlmostPSmall => "almost_p_small",
            cli::Prop::WeaklyPSmall => "weakly_p_small",
        };
        out.insert(key.to_string(), v);
    }
    Ok(Value::Object(out))
}

/// Random purely periodic set with modulus at most 12.
pub fn random_periodic(rng: &mut ChaCha8Rng) -> Periodic {
    let p: u64 = rng.gen_range(1..=12);
    let pick = |rng: &mut ChaCha8Rng| -> Vec<u64> { (0..p).filter(|_| rng.gen_bool(0.5)).collect() };
    let pos = pick(rng);
    let neg = pick(rng);
    Periodic::new(p, &pos, &neg, 0, &[], &[]).expect("residues are in range")
}

pub fn classify(ctx: &Ctx, a: &ClassifyArgs, r: &mut Report) -> Result<bool, Error> {
    let names = a
        .props
        .iter()
        .filter_map(|p| p.to_possible_value())
        .map(|v| v.get_name().into());
    r.param("props", Value::Array(names.collect()));
    r.param("max_f", a.max_f);
    r.param("k", a.k);
    r.param("n", a.n);
    r.param("iterations", a.iterations);
    let x = match &a.x {
        Some(text) => Some(parse_set(r, "x", text)?),
        None => None,
    };
    let t = ctx.threshold(r);
    if let Some(n) = a.corpus {
        let seed = ctx.seed.unwrap_or(0);
        r.sourced("seed", seed, ctx.seed.is_some());
        r.param("corpus", n);
        let w = ctx.window(r, Group::Z);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        for _ in 0..n {
            let s = SetRepr::Periodic(random_periodic(&mut rng));
            let props = classify_one(ctx, a, &s, x.as_ref(), w, t)?;
            rows.push(json!({ "set": report::set(&s), "properties": props }));
        }
        r.result = json!({ "sets": rows });
        return Ok(true);
    }
    let s = parse_set(r, "set", a.set.as_deref().unwrap_or_default())?;
    let w = ctx.window(r, s.group());
    r.result = json!({ "properties": classify_one(ctx, a, &s, x.as_ref(), w, t)? });
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_at_top_level_only() {
        assert_eq!(split_top("a;union(b;c);d", ';'), ["a", "union(b;c)", "d"]);
        assert_eq!(split_top("(1,2), 3", ','), ["(1,2)", "3"]);
    }

    #[test]
    fn element_lists() {
        assert_eq!(parse_elements("{0, -1}").unwrap(), [Element::Int(0), Element::Int(-1)]);
        assert_eq!(
            parse_elements("(1,2),(0,0)").unwrap(),
            [Element::Pair(1, 2), Element::Pair(0, 0)]
        );
        assert!(parse_elements("").unwrap().is_empty());
        assert!(parse_elements("1,x").is_err());
    }
}
