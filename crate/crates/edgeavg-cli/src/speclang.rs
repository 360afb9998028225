//! Flat string mini-languages for graphs and distributions:
//! `family:param[,param]` (e.g. `cycle:256`, `torus:16,2`, `file:g.edges`,
//! `k2`) and `rademacher | uniform:a,b | threepoint:x0,p |
//! powerlaw:p,pprime[,mmax] | constant:c | lower-bound`.

use edgeavg::distributions::DistributionSpec;
use edgeavg::experiments::{DistributionRule, GraphFamily};

/// Parses a graph spec into the family and the optional size parameter
/// (cycle/path/complete vertex count, torus side).
pub fn parse_graph(spec: &str) -> Result<(GraphFamily, Option<usize>), String> {
    let (name, params) = split_spec(spec);
    // complete-graph shorthand: k<N>
    if params.is_empty() && name.len() > 1 && name.starts_with('k') {
        if let Ok(n) = name[1..].parse::<usize>() {
            return Ok((GraphFamily::Complete, Some(n)));
        }
    }
    match name {
        "cycle" | "path" | "complete" => {
            let family = match name {
                "cycle" => GraphFamily::Cycle,
                "path" => GraphFamily::Path,
                _ => GraphFamily::Complete,
            };
            match params.len() {
                0 => Ok((family, None)),
                1 => Ok((family, Some(parse_num(params[0], "size")?))),
                _ => Err(format!("`{name}` takes at most one parameter")),
            }
        }
        "torus" => match params.len() {
            2 => {
                let side = parse_num(params[0], "side")?;
                let dim = parse_num(params[1], "dim")?;
                Ok((GraphFamily::Torus { dim }, Some(side)))
            }
            _ => Err("torus needs two parameters, e.g. torus:16,2".into()),
        },
        "file" => {
            let rest = spec
                .strip_prefix("file:")
                .ok_or_else(|| "file needs a path, e.g. file:graph.edges".to_string())?;
            if rest.is_empty() {
                return Err("file needs a path, e.g. file:graph.edges".into());
            }
            Ok((GraphFamily::File { path: rest.to_string() }, None))
        }
        _ => Err(format!(
            "unknown graph family `{name}` (expected cycle, path, complete, torus, file, or k<N>)"
        )),
    }
}

/// Parses a distribution spec.
pub fn parse_dist(spec: &str) -> Result<DistributionRule, String> {
    let (name, params) = split_spec(spec);
    let fixed = |s: DistributionSpec<f64>| DistributionRule::Fixed { spec: s };
    match name {
        "rademacher" => expect_params(&params, 0, name)
            .map(|_| fixed(DistributionSpec::rademacher())),
        "lower-bound" => expect_params(&params, 0, name).map(|_| DistributionRule::LowerBound),
        "constant" => {
            expect_params(&params, 1, name)?;
            Ok(fixed(DistributionSpec::constant(parse_real(
                params[0], "c",
            )?)))
        }
        "uniform" => {
            expect_params(&params, 2, name)?;
            let a = parse_real(params[0], "a")?;
            let b = parse_real(params[1], "b")?;
            DistributionSpec::uniform(a, b)
                .map(fixed)
                .map_err(|e| e.to_string())
        }
        "threepoint" => {
            expect_params(&params, 2, name)?;
            let x0 = parse_real(params[0], "x0")?;
            let p = parse_real(params[1], "p")?;
            DistributionSpec::three_point(x0, p)
                .map(fixed)
                .map_err(|e| e.to_string())
        }
        "powerlaw" => {
            if params.len() != 2 && params.len() != 3 {
                return Err("powerlaw needs p,pprime[,mmax]".into());
            }
            let p = parse_real(params[0], "p")?;
            let pp = parse_real(params[1], "pprime")?;
            let m_max = if params.len() == 3 {
                parse_num(params[2], "mmax")? as u64
            } else {
                1_000_000
            };
            DistributionSpec::power_law(p, pp, m_max)
                .map(fixed)
                .map_err(|e| e.to_string())
        }
        _ => Err(format!(
            "unknown distribution `{name}` (expected rademacher, uniform, threepoint, powerlaw, constant, or lower-bound)"
        )),
    }
}

/// Parses a comma-separated list of numbers.
pub fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<T>()
                .map_err(|_| format!("bad {what} entry `{tok}`"))
        })
        .collect()
}

fn split_spec(spec: &str) -> (&str, Vec<&str>) {
    match spec.split_once(':') {
        Some((name, rest)) => (name, rest.split(',').collect()),
        None => (spec, Vec::new()),
    }
}

fn expect_params(params: &[&str], n: usize, name: &str) -> Result<(), String> {
    if params.len() == n {
        Ok(())
    } else {
        Err(format!("`{name}` takes {n} parameter(s), got {}", params.len()))
    }
}

fn parse_num(tok: &str, what: &str) -> Result<usize, String> {
    tok.trim()
        .parse()
        .map_err(|_| format!("bad {what} `{tok}`"))
}

fn parse_real(tok: &str, what: &str) -> Result<f64, String> {
    tok.trim()
        .parse()
        .map_err(|_| format!("bad {what} `{tok}`"))
}
