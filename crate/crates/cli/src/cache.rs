//! Verified on-disk cache of group elements.
//!
//! ```text
//! resolvent-group-cache 1
//! group valentiner
//! dimension 3
//! order 1080
//! precision 256
//! <2·dimension² decimals per element, row-major, re im pairs>
//! ...
//! sha256 <hex of every preceding byte>
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use resolvent::icosahedron::{build_icosahedral_context_from_group, icosahedral_generators, IcosaContext};
use resolvent::valentiner::{build_from_group, parse_generators, ValentinerContext, GENERATOR_DATA};
use resolvent::{group_from_elements, BigComplex, LinearSubstitution, MatrixGroup, ToleranceConfig};
use sha2::{Digest, Sha256};

pub const CACHE_VERSION: u32 = 1;
const MAGIC: &str = "resolvent-group-cache";

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "RESOLVENT_CACHE_DIR";

fn digest(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

/// Serializes `group` and returns the file body together with its checksum.
pub fn encode_group(name: &str, group: &MatrixGroup) -> (String, String) {
    let mut body = format!(
        "{MAGIC} {CACHE_VERSION}\ngroup {name}\ndimension {}\norder {}\nprecision {}\n",
        group.dim(),
        group.order(),
        group.prec()
    );
    for e in group.elements() {
        let parts: Vec<String> = e
            .entries()
            .iter()
            .map(|z| {
                let (re, im) = z.to_decimal_pair();
                format!("{re} {im}")
            })
            .collect();
        body.push_str(&parts.join(" "));
        body.push('\n');
    }
    let sum = digest(&body);
    body.push_str(&format!("sha256 {sum}\n"));
    (body, sum)
}

/// Writes the group and returns its checksum.
pub fn cache_group(path: &Path, name: &str, group: &MatrixGroup) -> Result<String> {
    let (body, sum) = encode_group(name, group);
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, body).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(sum)
}

/// Stored matrices before re-verification.
#[derive(Clone, Debug)]
pub struct RawGroup {
    pub name: String,
    pub dim: usize,
    pub precision: u32,
    pub elements: Vec<LinearSubstitution>,
}

fn header<'a>(line: Option<&'a str>, key: &str) -> Result<&'a str> {
    let line = line.with_context(|| format!("missing `{key}` line"))?;
    line.strip_prefix(key)
        .and_then(|r| r.strip_prefix(' '))
        .with_context(|| format!("expected `{key}`, found `{line}`"))
}

/// Parses and checksums a cache body. Entries are read at `prec` bits.
pub fn decode_group(text: &str, prec: u32) -> Result<RawGroup> {
    let split = text.trim_end_matches('\n').rfind('\n').context("truncated cache")?;
    let (body, tail) = text.split_at(split + 1);
    let stored = tail.trim_end().strip_prefix("sha256 ").context("missing checksum line")?;
    ensure!(digest(body) == stored, "checksum mismatch");

    let mut lines = body.lines();
    let version: u32 = header(lines.next(), MAGIC)?.parse().context("bad version")?;
    ensure!(version == CACHE_VERSION, "cache version {version}, expected {CACHE_VERSION}");
    let name = header(lines.next(), "group")?.to_string();
    let dim: usize = header(lines.next(), "dimension")?.parse().context("bad dimension")?;
    let order: usize = header(lines.next(), "order")?.parse().context("bad order")?;
    let precision: u32 = header(lines.next(), "precision")?.parse().context("bad precision")?;
    ensure!((2..=3).contains(&dim), "dimension {dim} unsupported");

    let mut elements = Vec::with_capacity(order);
    for line in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        ensure!(fields.len() == 2 * dim * dim, "element line has {} fields", fields.len());
        let entries = fields
            .chunks(2)
            .map(|p| BigComplex::from_decimal_pair(prec, p[0], p[1]))
            .collect::<resolvent::Result<Vec<_>>>()?;
        elements.push(LinearSubstitution::new(dim, entries)?);
    }
    ensure!(elements.len() == order, "header order {order}, found {} elements", elements.len());
    Ok(RawGroup {
        name,
        dim,
        precision,
        elements,
    })
}

/// Loads a cached group and re-verifies closure, order and determinants
/// against `generators` at the configured precision. A cache written at any
/// other precision is rejected, so a hit reproduces a fresh build bit for bit.
pub fn load_group(
    path: &Path,
    name: &str,
    generators: &[LinearSubstitution],
    cfg: &ToleranceConfig,
) -> Result<MatrixGroup> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let raw = decode_group(&text, cfg.prec())?;
    ensure!(raw.name == name, "cache holds group `{}`, expected `{name}`", raw.name);
    if raw.precision != cfg.prec() {
        bail!("cache precision {} differs from configured {}", raw.precision, cfg.prec());
    }
    Ok(group_from_elements(raw.elements, generators, cfg)?)
}

/// Where a context came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Disabled,
    Hit,
    /// Absent, or rejected for the given reason; rebuilt and rewritten.
    Rebuilt(Option<String>),
}

pub fn cache_path(dir: &Path, name: &str, prec: u32) -> PathBuf {
    dir.join(format!("{name}-p{prec}.group"))
}

/// Loads from `dir` when possible, otherwise builds from generators and
/// writes the cache. Rejections are reported, never fatal.
fn with_cache<C>(
    dir: Option<&Path>,
    name: &str,
    generators: &[LinearSubstitution],
    cfg: &ToleranceConfig,
    from_group: impl Fn(MatrixGroup) -> resolvent::Result<C>,
    build: impl Fn() -> resolvent::Result<C>,
    group_of: impl Fn(&C) -> &MatrixGroup,
) -> resolvent::Result<(C, CacheOutcome)> {
    let Some(dir) = dir else {
        return Ok((build()?, CacheOutcome::Disabled));
    };
    let path = cache_path(dir, name, cfg.prec());
    let reason = if path.exists() {
        match load_group(&path, name, generators, cfg).and_then(|g| Ok(from_group(g)?)) {
            Ok(ctx) => return Ok((ctx, CacheOutcome::Hit)),
            Err(e) => Some(format!("{e:#}")),
        }
    } else {
        None
    };
    let ctx = build()?;
    if let Err(e) = cache_group(&path, name, group_of(&ctx)) {
        eprintln!("warning: cache not written: {e:#}");
    }
    Ok((ctx, CacheOutcome::Rebuilt(reason)))
}

pub fn icosahedral_context(dir: Option<&Path>, cfg: &ToleranceConfig) -> resolvent::Result<(IcosaContext, CacheOutcome)> {
    let (s, t) = icosahedral_generators(cfg.prec())?;
    with_cache(
        dir,
        "icosahedral",
        &[s, t],
        cfg,
        |g| build_icosahedral_context_from_group(g, cfg),
        || resolvent::icosahedron::build_icosahedral_context(cfg),
        |c| c.group(),
    )
}

pub fn valentiner_context(
    dir: Option<&Path>,
    cfg: &ToleranceConfig,
) -> resolvent::Result<(ValentinerContext, CacheOutcome)> {
    let named = parse_generators(GENERATOR_DATA, cfg.prec())?;
    let gens: Vec<LinearSubstitution> = named.iter().map(|g| g.matrix.clone()).collect();
    with_cache(
        dir,
        "valentiner",
        &gens,
        cfg,
        |g| build_from_group(g, named.clone(), cfg, cfg.eq_tolerance),
        || resolvent::valentiner::build_valentiner_context(cfg),
        |c| c.group(),
    )
}
