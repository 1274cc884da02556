//! Scenario loading, the end-to-end inequality check and report rendering.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::Value;

use crate::chow::{chow_height, chow_of_hypersurface, chow_of_linear, MultiHomForm};
use crate::constants::{assemble_constants, lcm_reduction, ConstantInputs, EffectiveConstants, LcmReduction};
use crate::error::{Error, Result};
use crate::filtration::hilbert_table;
use crate::function_field::{
    gauss_order_poly, height_point, height_poly_family, weil, Place, PlaceSet, ProjectivePoint,
};
use crate::graded_ideal::{
    binomial_big, check_subgeneral_position, default_nullstellensatz_cap, IdealGenerators, PositionReport,
    DEFAULT_DEGREE_CAP,
};
use crate::hilbert_bounds::{chardin_upper, hypersurface_table, sombra_lower, HilbertTable};
use crate::multipoly::{HomogeneousPoly, Poly};
use crate::serialize::{parse_rational, rational, rational_opt, rational_to_string};

/// Largest degree at which an `ideal` variety gets an exact Hilbert table;
/// beyond it the bounds are used.
pub const EXACT_HILBERT_LIMIT: u64 = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Variety {
    ProjectiveSpace,
    Hypersurface(HomogeneousPoly),
    Ideal { generators: IdealGenerators, chow_form: MultiHomForm },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    pub poly: HomogeneousPoly,
    pub degree: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub c1: Option<BigRational>,
    pub c1_prime: Option<BigRational>,
    pub m: Option<u64>,
    pub nullstellensatz_cap: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub ambient_dim: usize,
    pub variety: Variety,
    pub divisors: Vec<Divisor>,
    pub big_n: usize,
    /// Input order, duplicates rejected.
    pub places: Vec<Place>,
    pub epsilon: BigRational,
    pub points: Vec<ProjectivePoint>,
    pub overrides: Overrides,
}

struct Node<'a> {
    value: &'a Value,
    pointer: String,
}

impl<'a> Node<'a> {
    fn root(value: &'a Value) -> Self {
        Node {
            value,
            pointer: String::new(),
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Schema {
            pointer: if self.pointer.is_empty() { "/".into() } else { self.pointer.clone() },
            message: message.into(),
        }
    }

    fn child(&self, token: &str, value: &'a Value) -> Node<'a> {
        let escaped = token.replace('~', "~0").replace('/', "~1");
        Node {
            value,
            pointer: format!("{}/{}", self.pointer, escaped),
        }
    }

    fn opt(&self, key: &str) -> Option<Node<'a>> {
        match self.value.get(key) {
            None | Some(Value::Null) => None,
            Some(v) => Some(self.child(key, v)),
        }
    }

    fn field(&self, key: &str) -> Result<Node<'a>> {
        if !self.value.is_object() {
            return Err(self.err("expected an object"));
        }
        self.opt(key).ok_or_else(|| self.child(key, &Value::Null).err("missing required field"))
    }

    fn array(&self) -> Result<Vec<Node<'a>>> {
        let items = self.value.as_array().ok_or_else(|| self.err("expected an array"))?;
        Ok(items
            .iter()
            .enumerate()
            .map(|(i, v)| self.child(&i.to_string(), v))
            .collect())
    }

    fn uint(&self) -> Result<u64> {
        self.value.as_u64().ok_or_else(|| self.err("expected a nonnegative integer"))
    }

    fn str(&self) -> Result<&'a str> {
        self.value.as_str().ok_or_else(|| self.err("expected a string"))
    }

    fn rational(&self) -> Result<BigRational> {
        match self.value {
            Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(n.as_i64().unwrap().into())),
            _ => parse_rational(self.str()?).ok_or_else(|| self.err("expected a rational such as \"3/2\"")),
        }
    }
}

fn parse_variety(node: &Node<'_>, num_vars: usize) -> Result<Variety> {
    let kind = node.field("kind")?;
    match kind.str()? {
        "projective_space" => Ok(Variety::ProjectiveSpace),
        "hypersurface" => {
            if num_vars < 3 {
                return Err(kind.err("a hypersurface needs ambient_dim >= 2"));
            }
            let f = HomogeneousPoly::parse(node.field("F")?.str()?, num_vars)?;
            if f.degree() == 0 {
                return Err(node.field("F")?.err("F must have positive degree"));
            }
            Ok(Variety::Hypersurface(f))
        }
        "ideal" => {
            let gens_node = node.field("generators")?;
            let mut gens = Vec::new();
            for g in gens_node.array()? {
                gens.push(HomogeneousPoly::parse(g.str()?, num_vars)?);
            }
            let generators = IdealGenerators::new(num_vars, gens)?;
            let chow = node.field("chow_form")?;
            let dim = chow.field("dimension")?.uint()? as usize;
            let blocks = dim + 1;
            let poly = Poly::parse(chow.field("poly")?.str()?, blocks * num_vars)?;
            let chow_form = MultiHomForm::new(blocks, num_vars, poly)?;
            Ok(Variety::Ideal { generators, chow_form })
        }
        other => Err(kind.err(format!("unknown variety kind {other:?}"))),
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Schema {
        pointer: "/".into(),
        message: format!("invalid JSON: {e}"),
    })?;
    let root = Node::root(&value);
    let ambient_dim = root.field("ambient_dim")?.uint()? as usize;
    if ambient_dim == 0 {
        return Err(root.field("ambient_dim")?.err("ambient_dim must be positive"));
    }
    let num_vars = ambient_dim + 1;
    let variety = parse_variety(&root.field("variety")?, num_vars)?;

    let mut divisors = Vec::new();
    for node in root.field("divisors")?.array()? {
        let poly = HomogeneousPoly::parse(node.field("poly")?.str()?, num_vars)?;
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let deg_node = node.field("degree")?;
        let degree = deg_node.uint()? as u32;
        if degree != poly.degree() || degree == 0 {
            return Err(deg_node.err(format!("declared degree {degree}, polynomial has degree {}", poly.degree())));
        }
        divisors.push(Divisor { poly, degree });
    }

    let n_node = root.field("N")?;
    let big_n = n_node.uint()? as usize;

    let mut places = Vec::new();
    for node in root.field("places")?.array()? {
        places.push(Place::parse(node.str()?)?);
    }
    PlaceSet::new(places.iter().cloned())?;
    if places.is_empty() {
        return Err(root.field("places")?.err("S must be nonempty"));
    }

    let eps_node = root.field("epsilon")?;
    let epsilon = eps_node.rational()?;
    if epsilon <= BigRational::zero() {
        return Err(eps_node.err("epsilon must be positive"));
    }

    let mut points = Vec::new();
    if let Some(pts) = root.opt("points") {
        for node in pts.array()? {
            let coords = node
                .array()?
                .iter()
                .map(|c| c.str().map(str::to_string))
                .collect::<Result<Vec<_>>>()?;
            if coords.len() != num_vars {
                return Err(node.err(format!("expected {num_vars} coordinates, found {}", coords.len())));
            }
            points.push(ProjectivePoint::parse(&coords)?);
        }
    }

    let mut overrides = Overrides::default();
    if let Some(o) = root.opt("constants_overrides") {
        overrides.c1 = o.opt("c1").map(|n| n.rational()).transpose()?;
        overrides.c1_prime = o.opt("c1_prime").map(|n| n.rational()).transpose()?;
        overrides.m = o.opt("m").map(|n| n.uint()).transpose()?;
        overrides.nullstellensatz_cap = o.opt("nullstellensatz_cap").map(|n| n.uint().map(|v| v as u32)).transpose()?;
    }

    let scenario = Scenario {
        ambient_dim,
        variety,
        divisors,
        big_n,
        places,
        epsilon,
        points,
        overrides,
    };
    let n = scenario.dimension();
    if big_n < n || big_n == 0 {
        return Err(n_node.err(format!("need N >= n = {n}")));
    }
    if scenario.divisors.len() <= big_n {
        return Err(root.field("divisors")?.err(format!("need q > N = {big_n} divisors")));
    }
    Ok(scenario)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    parse_scenario(&text)
}

impl Scenario {
    /// `n = dim X`.
    pub fn dimension(&self) -> usize {
        match &self.variety {
            Variety::ProjectiveSpace => self.ambient_dim,
            Variety::Hypersurface(_) => self.ambient_dim - 1,
            Variety::Ideal { chow_form, .. } => chow_form.blocks() - 1,
        }
    }

    /// `Delta = deg X`.
    pub fn variety_degree(&self) -> u32 {
        match &self.variety {
            Variety::ProjectiveSpace => 1,
            Variety::Hypersurface(f) => f.degree(),
            Variety::Ideal { chow_form, .. } => chow_form.block_degree(),
        }
    }

    pub fn ideal(&self) -> IdealGenerators {
        let nv = self.ambient_dim + 1;
        match &self.variety {
            Variety::ProjectiveSpace => IdealGenerators::zero(nv),
            Variety::Hypersurface(f) => IdealGenerators::new(nv, vec![f.clone()]).expect("validated"),
            Variety::Ideal { generators, .. } => generators.clone(),
        }
    }

    pub fn chow_form(&self) -> Result<MultiHomForm> {
        let nv = self.ambient_dim + 1;
        match &self.variety {
            Variety::ProjectiveSpace => {
                let basis = (0..nv)
                    .map(|i| {
                        let coords: Vec<String> = (0..nv).map(|j| if i == j { "1" } else { "0" }.to_string()).collect();
                        ProjectivePoint::parse(&coords)
                    })
                    .collect::<Result<Vec<_>>>()?;
                chow_of_linear(&basis)
            }
            Variety::Hypersurface(f) => chow_of_hypersurface(f),
            Variety::Ideal { chow_form, .. } => Ok(chow_form.clone()),
        }
    }

    pub fn polys(&self) -> Vec<HomogeneousPoly> {
        self.divisors.iter().map(|d| d.poly.clone()).collect()
    }

    /// `H(k)` for `0 <= k <= m`, and whether the values are exact.
    pub fn hilbert_table(&self, m: u64) -> (HilbertTable, bool) {
        match &self.variety {
            Variety::Ideal { generators, .. } if m <= EXACT_HILBERT_LIMIT => (hilbert_table(generators, m as u32), true),
            _ => hilbert_table_for(
                self.dimension() as u64,
                u64::from(self.variety_degree()),
                self.ambient_dim as u64,
                m,
            ),
        }
    }
}

/// `H(k)` for `0 <= k <= m` from `(n, Delta, M)` alone: exact for projective
/// space and hypersurfaces, otherwise the lower bound below `m` and the upper
/// bound at `m`.
pub fn hilbert_table_for(n: u64, delta: u64, ambient: u64, m: u64) -> (HilbertTable, bool) {
    if n == ambient {
        let t = (0..=m).map(|k| (k, BigInt::from(binomial_big(k + ambient, ambient)))).collect();
        return (t, true);
    }
    if n + 1 == ambient {
        return (hypersurface_table(n, delta, m), true);
    }
    let mut t: HilbertTable = (0..m).map(|k| (k, sombra_lower(k, n, delta))).collect();
    t.insert(m, chardin_upper(m, n, delta));
    (t, false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    InequalityHolds,
    HeightSmall,
    OnDivisor,
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeilRow {
    pub place: Place,
    #[serde(with = "crate::serialize::rational_vec")]
    pub values: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointRecord {
    pub index: usize,
    pub point: String,
    pub verdict: Verdict,
    #[serde(with = "rational")]
    pub height: BigRational,
    /// Divisors vanishing at the point.
    pub on_divisors: Vec<usize>,
    pub weil: Vec<WeilRow>,
    #[serde(with = "rational_opt")]
    pub lhs: Option<BigRational>,
    #[serde(with = "rational_opt")]
    pub rhs_main: Option<BigRational>,
    #[serde(with = "rational_opt")]
    pub rhs_full: Option<BigRational>,
    /// `lhs / h(x)` when `h(x) > 0`.
    #[serde(with = "rational_opt")]
    pub ratio: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub ambient_dim: usize,
    pub n: usize,
    pub delta: u32,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub q: usize,
    pub divisors: Vec<String>,
    pub places: Vec<Place>,
    #[serde(with = "rational")]
    pub epsilon: BigRational,
    /// `N(n+1) + eps`.
    #[serde(with = "rational")]
    pub main_coefficient: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionSummary {
    pub d: u32,
    pub normalized: Vec<String>,
    pub units: Vec<String>,
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub scenario: Summary,
    pub position: PositionReport,
    /// Subgeneral position at `N - 1`, when `N > n`.
    pub position_below: Option<PositionReport>,
    pub reduction: ReductionSummary,
    pub inputs: ConstantInputs,
    pub hilbert_exact: bool,
    pub constants: EffectiveConstants,
    pub caveats: Vec<String>,
    pub warnings: Vec<String>,
    pub points: Vec<PointRecord>,
}

impl Report {
    pub fn has_violation(&self) -> bool {
        self.points.iter().any(|p| p.verdict == Verdict::Violation)
    }
}

/// Degree cap for the emptiness certificates.
pub fn position_cap(scenario: &Scenario) -> u32 {
    scenario.overrides.nullstellensatz_cap.unwrap_or_else(|| {
        let max_deg = scenario
            .divisors
            .iter()
            .map(|d| d.degree)
            .chain(scenario.ideal().generators().iter().map(HomogeneousPoly::degree))
            .max()
            .unwrap_or(1);
        default_nullstellensatz_cap(max_deg, scenario.ambient_dim, DEFAULT_DEGREE_CAP)
    })
}

/// Heights and the `e_p` term of a scenario, ready for
/// [`assemble_constants`].
pub fn constant_inputs(scenario: &Scenario, red: &LcmReduction, form: &MultiHomForm) -> Result<ConstantInputs> {
    let mut h_q = Vec::new();
    for d in &scenario.divisors {
        h_q.push(height_poly_family(std::slice::from_ref(&d.poly))?);
    }
    let mut e_s_term = BigRational::zero();
    for p in &scenario.places {
        e_s_term += BigRational::from_integer(BigInt::from(gauss_order_poly(p, &red.normalized)? * p.degree()));
    }
    Ok(ConstantInputs {
        n: scenario.dimension() as u64,
        delta: u64::from(scenario.variety_degree()),
        ambient_dim: scenario.ambient_dim as u64,
        big_n: scenario.big_n as u64,
        q: scenario.divisors.len() as u64,
        degrees: scenario.divisors.iter().map(|d| u64::from(d.degree)).collect(),
        epsilon: scenario.epsilon.clone(),
        s_card: scenario.places.len() as u64,
        s_degree: scenario.places.iter().map(Place::degree).sum::<i64>() as u64,
        h_fx: chow_height(form),
        h_q_family: height_poly_family(&red.normalized)?,
        h_q,
        e_s_term,
        c1: scenario.overrides.c1.clone().unwrap_or_else(BigRational::zero),
        c1_prime: scenario.overrides.c1_prime.clone().unwrap_or_else(BigRational::zero),
        m: scenario.overrides.m,
    })
}

fn on_variety(gens: &IdealGenerators, x: &ProjectivePoint) -> Result<bool> {
    for g in gens.generators() {
        if !g.eval(x.coords())?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn evaluate_point(
    scenario: &Scenario,
    red: &LcmReduction,
    constants: &EffectiveConstants,
    index: usize,
    x: &ProjectivePoint,
) -> Result<PointRecord> {
    let height = height_point(x);
    let mut on_divisors = Vec::new();
    for (i, d) in scenario.divisors.iter().enumerate() {
        if d.poly.eval(x.coords())?.is_zero() {
            on_divisors.push(i);
        }
    }
    let mut record = PointRecord {
        index,
        point: x.to_string(),
        verdict: Verdict::OnDivisor,
        height: height.clone(),
        on_divisors,
        weil: Vec::new(),
        lhs: None,
        rhs_main: None,
        rhs_full: None,
        ratio: None,
    };
    if !record.on_divisors.is_empty() {
        return Ok(record);
    }

    let weights: Vec<BigRational> = scenario
        .divisors
        .iter()
        .map(|d| BigRational::new(BigInt::one(), BigInt::from(d.degree)))
        .collect();
    for p in &scenario.places {
        let mut values = Vec::with_capacity(scenario.divisors.len());
        for d in &scenario.divisors {
            values.push(weil(p, &d.poly, x)?);
        }
        record.weil.push(WeilRow { place: p.clone(), values });
    }

    // Places first, then divisors.
    let by_place: BigRational = record
        .weil
        .iter()
        .map(|row| row.values.iter().zip(&weights).map(|(v, w)| v * w).sum::<BigRational>())
        .sum();
    // Divisors first, through the equal-degree family: lambda_{Q_i}/d_i =
    // lambda_{normalized_i}/d.
    let d = BigRational::from_integer(BigInt::from(red.d));
    let mut by_divisor = BigRational::zero();
    for q in &red.normalized {
        let mut acc = BigRational::zero();
        for p in &scenario.places {
            acc += weil(p, q, x)?;
        }
        by_divisor += acc / &d;
    }
    assert_eq!(by_place, by_divisor, "lhs disagrees between summation orders");

    let main = main_coefficient(scenario) * &height;
    let full = &main + &constants.c_prime_eps;
    record.verdict = if by_place <= full {
        Verdict::InequalityHolds
    } else if height <= constants.c_eps {
        Verdict::HeightSmall
    } else {
        Verdict::Violation
    };
    if !height.is_zero() {
        record.ratio = Some(&by_place / &height);
    }
    record.lhs = Some(by_place);
    record.rhs_main = Some(main);
    record.rhs_full = Some(full);
    Ok(record)
}

fn main_coefficient(scenario: &Scenario) -> BigRational {
    BigRational::from_integer(BigInt::from(scenario.big_n * (scenario.dimension() + 1))) + &scenario.epsilon
}

/// Position check, reduction to equal degrees, constants, then every point.
pub fn run_check(scenario: &Scenario) -> Result<Report> {
    let mut warnings = Vec::new();
    let mut caveats = Vec::new();
    let gens = scenario.ideal();
    let qs = scenario.polys();
    let cap = position_cap(scenario);

    let position = check_subgeneral_position(&gens, &qs, scenario.big_n, cap)?;
    if !position.in_position {
        let w: Vec<String> = position.witnesses().iter().map(|s| format!("{s:?}")).collect();
        warnings.push(format!(
            "position check failed: no emptiness certificate up to degree {cap} for subsets {}",
            w.join(", ")
        ));
    }
    let position_below = if scenario.big_n > scenario.dimension() {
        Some(check_subgeneral_position(&gens, &qs, scenario.big_n - 1, cap)?)
    } else {
        None
    };

    let red = lcm_reduction(&qs)?;
    let form = scenario.chow_form()?;
    let inputs = constant_inputs(scenario, &red, &form)?;
    let m = inputs.degree_m();
    let (table, hilbert_exact) = scenario.hilbert_table(m);
    let constants = assemble_constants(&inputs, &table)?;

    if scenario.overrides.c1.is_none() || scenario.overrides.c1_prime.is_none() {
        caveats.push("c1 and c1_prime default to 0; the constants are then not guaranteed values".into());
    }
    if !hilbert_exact {
        caveats.push(format!(
            "Hilbert values above degree {EXACT_HILBERT_LIMIT} use the lower bound in S and the upper bound at m"
        ));
    }
    if constants.b_degree != constants.m {
        caveats.push(format!("b evaluated at degree {} instead of m = {}", constants.b_degree, constants.m));
    }
    caveats.push("points in the exceptional set are not identified".into());

    let mut points = Vec::new();
    for (k, x) in scenario.points.iter().enumerate() {
        if !on_variety(&gens, x)? {
            warnings.push(format!("point #{k} {x} is not on X; skipped"));
            continue;
        }
        points.push(evaluate_point(scenario, &red, &constants, k, x)?);
    }

    Ok(Report {
        scenario: Summary {
            ambient_dim: scenario.ambient_dim,
            n: scenario.dimension(),
            delta: scenario.variety_degree(),
            big_n: scenario.big_n,
            q: qs.len(),
            divisors: qs.iter().map(ToString::to_string).collect(),
            places: scenario.places.clone(),
            epsilon: scenario.epsilon.clone(),
            main_coefficient: main_coefficient(scenario),
        },
        position,
        position_below,
        reduction: ReductionSummary {
            d: red.d,
            normalized: red.normalized.iter().map(ToString::to_string).collect(),
            units: red.units.iter().map(ToString::to_string).collect(),
            exponents: red.exponents.clone(),
        },
        inputs,
        hilbert_exact,
        constants,
        caveats,
        warnings,
        points,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Renders the report and writes it to `path` when given.
pub fn emit_report(report: &Report, format: Format, path: Option<&Path>) -> Result<String> {
    let out = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => render_text(report),
    };
    if let Some(p) = path {
        std::fs::write(p, &out)?;
    }
    Ok(out)
}

fn table(out: &mut String, header: &[String], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let _ = writeln!(out, "{}", line(header).trim_end());
    for row in rows {
        let _ = writeln!(out, "{}", line(row).trim_end());
    }
}

fn opt(r: &Option<BigRational>) -> String {
    r.as_ref().map_or_else(|| "-".into(), rational_to_string)
}

pub fn render_text(report: &Report) -> String {
    let s = &report.scenario;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "X: dim n = {}, degree {} in P^{}; q = {} divisors, N = {}, eps = {}",
        s.n,
        s.delta,
        s.ambient_dim,
        s.q,
        s.big_n,
        rational_to_string(&s.epsilon)
    );
    let places: Vec<String> = s.places.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "S = {{{}}}", places.join(", "));
    let _ = writeln!(
        out,
        "position (N = {}): {}",
        report.position.n,
        if report.position.in_position { "certified" } else { "not certified" }
    );
    if let Some(below) = &report.position_below {
        let w: Vec<String> = below.witnesses().iter().map(|x| format!("{x:?}")).collect();
        let _ = writeln!(
            out,
            "position (N = {}): {}",
            below.n,
            if below.in_position { "certified".to_string() } else { format!("refuted, witnesses {}", w.join(" ")) }
        );
    }
    let _ = writeln!(out, "common degree d = {}", report.reduction.d);

    let c = &report.constants;
    let _ = writeln!(out, "\nconstants");
    let rows: Vec<Vec<String>> = vec![
        vec!["a_eps".into(), c.a_eps.to_string()],
        vec!["m".into(), c.m.to_string()],
        vec!["H(m)".into(), c.h_m.to_string()],
        vec!["S(m/d-1)".into(), c.s_sum.to_string()],
        vec!["b".into(), c.b.to_string()],
        vec!["a".into(), rational_to_string(&c.lemma37_a)],
        vec!["b1".into(), rational_to_string(&c.b1)],
        vec!["b2".into(), rational_to_string(&c.b2)],
        vec!["b3".into(), rational_to_string(&c.b3)],
        vec!["c_eps".into(), rational_to_string(&c.c_eps)],
        vec!["c'_eps".into(), rational_to_string(&c.c_prime_eps)],
    ];
    table(&mut out, &["name".into(), "value".into()], &rows);

    for p in &report.points {
        let _ = writeln!(
            out,
            "\npoint #{} {}  h = {}  verdict {:?}",
            p.index,
            p.point,
            rational_to_string(&p.height),
            p.verdict
        );
        if !p.on_divisors.is_empty() {
            let _ = writeln!(out, "  on divisors {:?}", p.on_divisors);
            continue;
        }
        let mut header = vec!["place".to_string()];
        header.extend((0..s.q).map(|i| format!("Q{i}")));
        let rows: Vec<Vec<String>> = p
            .weil
            .iter()
            .map(|r| {
                let mut row = vec![r.place.to_string()];
                row.extend(r.values.iter().map(rational_to_string));
                row
            })
            .collect();
        table(&mut out, &header, &rows);
        let _ = writeln!(
            out,
            "  lhs = {}  rhs_main = {}  rhs_full = {}",
            opt(&p.lhs),
            opt(&p.rhs_main),
            opt(&p.rhs_full)
        );
    }
    if report.points.is_empty() {
        let _ = writeln!(out, "\nno points");
    }
    for c in &report.caveats {
        let _ = writeln!(out, "caveat: {c}");
    }
    for w in &report.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conic(points: &str) -> String {
        format!(
            r#"{{
  "ambient_dim": 2,
  "variety": {{"kind": "hypersurface", "F": "X0*X2 - X1^2"}},
  "divisors": [
    {{"poly": "X0", "degree": 1}},
    {{"poly": "X1", "degree": 1}},
    {{"poly": "X2", "degree": 1}},
    {{"poly": "X0 + X1 + X2", "degree": 1}}
  ],
  "N": 2,
  "places": ["t", "inf"],
  "epsilon": "1",
  "points": {points}
}}"#
        )
    }

    fn r(a: i64) -> BigRational {
        BigRational::from_integer(a.into())
    }

    #[test]
    fn schema_errors_carry_pointers() {
        let mut v: Value = serde_json::from_str(&conic("[]")).unwrap();
        v.as_object_mut().unwrap().remove("N");
        match parse_scenario(&v.to_string()) {
            Err(Error::Schema { pointer, .. }) => assert_eq!(pointer, "/N"),
            other => panic!("{other:?}"),
        }
        let bad = conic("[]").replace("\"X1\", \"degree\": 1", "\"X1 + X0^2\", \"degree\": 1");
        assert_eq!(parse_scenario(&bad), Err(Error::NotHomogeneous));
        let bad = conic("[[\"1\", \"t\"]]");
        assert!(matches!(parse_scenario(&bad), Err(Error::Schema { pointer, .. }) if pointer == "/points/0"));
        let bad = conic("[]").replace("\"degree\": 1}", "\"degree\": 2}");
        assert!(matches!(parse_scenario(&bad), Err(Error::Schema { pointer, .. }) if pointer.ends_with("/degree")));
    }

    #[test]
    fn conic_example() {
        let s = parse_scenario(&conic(r#"[["1","t","t^2"], ["1","0","0"], ["1","1","2"]]"#)).unwrap();
        assert_eq!(s.divisors.len(), 4);
        assert_eq!((s.dimension(), s.variety_degree()), (1, 2));
        let report = run_check(&s).unwrap();
        assert!(report.position.in_position);
        assert!(!report.position_below.as_ref().unwrap().in_position);
        assert_eq!(report.points.len(), 2);
        let p = &report.points[0];
        assert_eq!(p.verdict, Verdict::InequalityHolds);
        assert_eq!(p.height, r(2));
        assert_eq!(p.lhs, Some(r(6)));
        assert_eq!(p.rhs_main, Some(r(10)));
        assert_eq!(p.weil[0].values, vec![r(0), r(1), r(2), r(0)]);
        assert_eq!(p.weil[1].values, vec![r(2), r(1), r(0), r(0)]);
        assert_eq!(report.points[1].verdict, Verdict::OnDivisor);
        assert_eq!(report.points[1].on_divisors, vec![1, 2]);
        assert!(report.warnings.iter().any(|w| w.contains("not on X")));
        let json = emit_report(&report, Format::Json, None).unwrap();
        assert!(json.contains("\"lhs\": \"6/1\""));
        let text = emit_report(&report, Format::Text, None).unwrap();
        assert!(text.contains("Q3"));
    }

    #[test]
    fn constants_only_report() {
        let s = parse_scenario(&conic("[]")).unwrap();
        let report = run_check(&s).unwrap();
        assert!(report.points.is_empty());
        assert!(report.constants.c_prime_eps.is_zero());
        assert!(render_text(&report).contains("no points"));
    }

    #[test]
    fn projective_line_and_ideal_kinds() {
        let text = r#"{
  "ambient_dim": 1,
  "variety": {"kind": "projective_space"},
  "divisors": [{"poly": "X0", "degree": 1}, {"poly": "X1", "degree": 1}, {"poly": "X0 - X1", "degree": 1}],
  "N": 1,
  "places": ["t"],
  "epsilon": "1/2",
  "points": [["t", "1"]]
}"#;
        let report = run_check(&parse_scenario(text).unwrap()).unwrap();
        assert!(report.position.in_position);
        assert_eq!(report.points[0].verdict, Verdict::InequalityHolds);

        let text = r#"{
  "ambient_dim": 2,
  "variety": {"kind": "ideal", "generators": ["X2"],
              "chow_form": {"dimension": 1, "poly": "X0*X4 - X1*X3"}},
  "divisors": [{"poly": "X0", "degree": 1}, {"poly": "X1", "degree": 1}, {"poly": "X0 + X1", "degree": 1}],
  "N": 1,
  "places": ["t", "inf"],
  "epsilon": "1",
  "points": [["1", "t", "0"]],
  "constants_overrides": {"m": 4}
}"#;
        let report = run_check(&parse_scenario(text).unwrap()).unwrap();
        assert!(report.position.in_position);
        assert_eq!(report.constants.m, 4);
        assert_eq!(report.points[0].lhs, Some(r(2)));
    }
}
