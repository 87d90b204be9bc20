//! Closed-form lower bounds, the achievable-point atlas, and the lower
//! convex envelope of achievability — all in exact rational arithmetic.
//!
//! Floating point appears only at CSV-emission time (12 significant digits);
//! every comparison, envelope breakpoint and gap is an exact `Ratio<i64>`.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = Ratio<i64>;

/// Shorthand rational constructor.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Ratio::new(numer, denom)
}

/// Binomial coefficient C(n, r) as an exact i64 (small arguments only).
pub fn binomial(n: u32, r: u32) -> i64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: i64 = 1;
    for i in 0..r {
        acc = acc * i64::from(n - i) / i64::from(i + 1);
    }
    acc
}

/// An (M, R) pair in file units together with the scheme or bound that
/// produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint {
    pub m: Rational,
    pub r: Rational,
    pub source: String,
}

impl RatePoint {
    pub fn new(m: Rational, r: Rational, source: impl Into<String>) -> Self {
        RatePoint {
            m,
            r,
            source: source.into(),
        }
    }
}

/// A half-plane constraint a·M + b·R >= c with b > 0, valid over a range
/// of M.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundLine {
    pub m_coeff: Rational,
    pub r_coeff: Rational,
    pub rhs: Rational,
    pub m_range: (Rational, Rational),
    pub source: String,
}

impl BoundLine {
    pub fn new(
        m_coeff: Rational,
        r_coeff: Rational,
        rhs: Rational,
        m_range: (Rational, Rational),
        source: impl Into<String>,
    ) -> Result<Self> {
        if r_coeff <= Rational::zero() {
            return Err(Error::InvalidParameter(
                "bound line needs a positive R coefficient".into(),
            ));
        }
        Ok(BoundLine {
            m_coeff,
            r_coeff,
            rhs,
            m_range,
            source: source.into(),
        })
    }

    /// Rate lower bound implied at memory `m`, clamped below at 0.
    pub fn rate_at(&self, m: Rational) -> Rational {
        let r = (self.rhs - self.m_coeff * m) / self.r_coeff;
        r.max(Rational::zero())
    }
}

/// The (K,K) converse line K·M + K(K−1)·R >= K²−1.
pub fn theorem2_line(k: u32) -> Result<BoundLine> {
    if k < 2 {
        return Err(Error::TooFewUsers(k));
    }
    let ki = i64::from(k);
    BoundLine::new(
        rat(ki, 1),
        rat(ki * (ki - 1), 1),
        rat(ki * ki - 1, 1),
        (rat(0, 1), rat(ki, 1)),
        format!("theorem2(K={k})"),
    )
}

/// Rate bound from the (K,K) converse at memory `m`, clamped at 0.
pub fn theorem2_bound(k: u32, m: Rational) -> Result<Rational> {
    Ok(theorem2_line(k)?.rate_at(m))
}

/// Tian's computed (3,3) bound 3M + 6R >= 8, kept as its own labeled line.
pub fn lemma1_line() -> BoundLine {
    BoundLine {
        m_coeff: rat(3, 1),
        r_coeff: rat(6, 1),
        rhs: rat(8, 1),
        m_range: (rat(0, 1), rat(3, 1)),
        source: "lemma1(3,3)".into(),
    }
}

pub fn lemma1_bound(m: Rational) -> Rational {
    lemma1_line().rate_at(m)
}

/// Cutset bound: R >= max over s in [min(N,K)] of s − s·M/⌊N/s⌋, clamped
/// at 0.
pub fn cutset_bound(n: u32, k: u32, m: Rational) -> Result<Rational> {
    if n < 1 || k < 1 {
        return Err(Error::InvalidParameter(
            "cutset bound needs N, K >= 1".into(),
        ));
    }
    let mut best = Rational::zero();
    for s in 1..=n.min(k) {
        let si = i64::from(s);
        let floor_n_s = i64::from(n / s);
        let val = rat(si, 1) - rat(si, 1) * m / rat(floor_n_s, 1);
        best = best.max(val);
    }
    Ok(best)
}

/// Per-s cutset constraint lines over M in [0, N].
pub fn cutset_lines(n: u32, k: u32) -> Result<Vec<BoundLine>> {
    if n < 1 || k < 1 {
        return Err(Error::InvalidParameter(
            "cutset bound needs N, K >= 1".into(),
        ));
    }
    let mut lines = Vec::new();
    for s in 1..=n.min(k) {
        let si = i64::from(s);
        let floor_n_s = i64::from(n / s);
        // s − s·M/⌊N/s⌋ <= R  ⇔  (s/⌊N/s⌋)·M + R >= s
        lines.push(BoundLine::new(
            rat(si, floor_n_s),
            rat(1, 1),
            rat(si, 1),
            (rat(0, 1), rat(i64::from(n), 1)),
            format!("cutset(s={s})"),
        )?);
    }
    Ok(lines)
}

/// The coded-prefetching point ((K²−K−1)/K, 1/(K−1)) achieved by
/// [`crate::scheme_kk`].
pub fn kk_scheme_point(k: u32) -> Result<RatePoint> {
    if k < 2 {
        return Err(Error::TooFewUsers(k));
    }
    let ki = i64::from(k);
    Ok(RatePoint::new(
        rat(ki * ki - ki - 1, ki),
        rat(1, ki - 1),
        format!("kk_coded(K={k})"),
    ))
}

/// All formula-generated achievable points from the published scheme
/// families, as exact rationals with source labels.
///
/// The Amiri–Gunduz and Tian–Chen rows are atlas-only context: no bit-level
/// scheme backs them here, and their labels carry an `atlas-only` marker.
pub fn atlas_points(n: u32, k: u32) -> Result<Vec<RatePoint>> {
    if n < 1 || k < 1 {
        return Err(Error::InvalidParameter("atlas needs N, K >= 1".into()));
    }
    let ni = i64::from(n);
    let ki = i64::from(k);
    let mut pts = Vec::new();

    // Chen et al.: (1/K, N(1−1/K)), coded prefetching.
    pts.push(RatePoint::new(
        rat(1, ki),
        rat(ni, 1) * rat(ki - 1, ki),
        "chen",
    ));

    // Amiri–Gunduz: ((N−1)/K, N(1−N/(2K))).
    pts.push(RatePoint::new(
        rat(ni - 1, ki),
        rat(ni, 1) * (rat(1, 1) - rat(ni, 2 * ki)),
        "amiri_gunduz[atlas-only]",
    ));

    // Gómez-Vilardebó: (N/(Kq), N(1−(N+1)/(K(q+1)))) for q in [1, N].
    for q in 1..=n {
        let qi = i64::from(q);
        pts.push(RatePoint::new(
            rat(ni, ki * qi),
            rat(ni, 1) * (rat(1, 1) - rat(ni + 1, ki * (qi + 1))),
            format!("gomez_vilardebo(q={q})"),
        ));
    }

    // Tian–Chen: (t[(N−1)t+K−N]/(K(K−1)), N(1−t/K)) for t in [0, N].
    if k >= 2 {
        for t in 0..=n {
            let ti = i64::from(t);
            pts.push(RatePoint::new(
                rat(ti * ((ni - 1) * ti + ki - ni), ki * (ki - 1)),
                rat(ni, 1) * rat(ki - ti, ki),
                format!("tian_chen(t={t})[atlas-only]"),
            ));
        }
    }

    // Maddah-Ali–Niesen: (Nr/K, (K−r)/(1+r)) for r in [0, K].
    for r in 0..=k {
        let ri = i64::from(r);
        pts.push(RatePoint::new(
            rat(ni * ri, ki),
            rat(ki - ri, 1 + ri),
            format!("mn(r={r})"),
        ));
    }

    // Yu et al.: (Nr/K, [C(K,r+1)−C(K−N,r+1)]/C(K,r)).
    for r in 0..=k {
        let ri = i64::from(r);
        let numer = binomial(k, r + 1) - binomial(k.saturating_sub(n), r + 1);
        pts.push(RatePoint::new(
            rat(ni * ri, ki),
            rat(numer, binomial(k, r)),
            format!("yu(r={r})"),
        ));
    }

    // The new coded-prefetching point, defined for N=K.
    if n == k && k >= 2 {
        pts.push(kk_scheme_point(k)?);
    }

    // Keep points inside the meaningful memory range.
    pts.retain(|p| p.m >= Rational::zero() && p.m <= rat(ni, 1) && p.r >= Rational::zero());
    Ok(pts)
}

/// Lower convex envelope of a point set: the best rate achievable by memory
/// sharing across the given points, as ordered breakpoints.
#[derive(Debug, Clone)]
pub struct Envelope {
    points: Vec<(Rational, Rational)>,
    sources: Vec<String>,
}

impl Envelope {
    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn source(&self, idx: usize) -> &str {
        &self.sources[idx]
    }

    pub fn m_range(&self) -> (Rational, Rational) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }

    /// Envelope value at `m`, or None outside the covered range.
    pub fn eval(&self, m: Rational) -> Option<Rational> {
        let (lo, hi) = self.m_range();
        if m < lo || m > hi {
            return None;
        }
        let i = match self.points.iter().position(|p| p.0 >= m) {
            Some(0) => return Some(self.points[0].1),
            Some(i) => i - 1,
            None => return None,
        };
        let (m0, r0) = self.points[i];
        let (m1, r1) = self.points[i + 1];
        if m == m0 {
            return Some(r0);
        }
        Some(r0 + (r1 - r0) * (m - m0) / (m1 - m0))
    }

    /// Label of the construction achieving the envelope at `m`: a breakpoint
    /// source, or the memory-shared pair spanning the segment.
    pub fn achieving_source(&self, m: Rational) -> Option<String> {
        let (lo, hi) = self.m_range();
        if m < lo || m > hi {
            return None;
        }
        if let Some(i) = self.points.iter().position(|p| p.0 == m) {
            return Some(self.sources[i].clone());
        }
        let i = self.points.iter().position(|p| p.0 > m)? - 1;
        Some(format!("share({} | {})", self.sources[i], self.sources[i + 1]))
    }
}

/// Computes the lower convex envelope of `points` over their M range.
pub fn lower_envelope(points: &[RatePoint]) -> Result<Envelope> {
    if points.is_empty() {
        return Err(Error::EmptyInput("lower_envelope needs at least 1 point"));
    }
    // Per M, keep only the lowest R.
    let mut best: Vec<(Rational, Rational, String)> = Vec::new();
    let mut sorted: Vec<&RatePoint> = points.iter().collect();
    sorted.sort_by(|a, b| (a.m, a.r).cmp(&(b.m, b.r)));
    for p in sorted {
        match best.last() {
            Some(last) if last.0 == p.m => {} // higher or equal R at same M
            _ => best.push((p.m, p.r, p.source.clone())),
        }
    }
    // Monotone-chain lower hull: drop a middle point lying on or above the
    // chord of its neighbours.
    let mut hull: Vec<(Rational, Rational, String)> = Vec::new();
    for p in best {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            // b above or on segment a->p ?
            let lhs = (b.1 - a.1) * (p.0 - a.0);
            let rhs = (p.1 - a.1) * (b.0 - a.0);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    Ok(Envelope {
        points: hull.iter().map(|(m, r, _)| (*m, *r)).collect(),
        sources: hull.into_iter().map(|(_, _, s)| s).collect(),
    })
}

/// One row of the tradeoff table at a grid memory value.
#[derive(Debug, Clone)]
pub struct GapRow {
    pub m: Rational,
    pub r_envelope: Rational,
    pub r_theorem2: Rational,
    pub r_cutset: Rational,
    pub r_lemma1: Option<Rational>,
    pub gap: Rational,
    pub achieving_source: String,
}

/// Evaluates envelope, every bound and the exact gap at each grid point.
/// The lemma-1 column is populated only for the (3,3) network.
pub fn gap_report(n: u32, k: u32, grid: &[Rational]) -> Result<Vec<GapRow>> {
    let envelope = lower_envelope(&atlas_points(n, k)?)?;
    grid.iter()
        .map(|&m| gap_row(n, k, m, &envelope))
        .collect()
}

fn gap_row(n: u32, k: u32, m: Rational, envelope: &Envelope) -> Result<GapRow> {
    if m < Rational::zero() || m > rat(i64::from(n), 1) {
        return Err(Error::InvalidParameter(format!(
            "grid point M={m} outside [0,{n}]"
        )));
    }
    let r_envelope = envelope
        .eval(m)
        .ok_or_else(|| Error::InvalidParameter(format!("M={m} outside envelope range")))?;
    let r_theorem2 = theorem2_bound(k, m)?;
    let r_cutset = cutset_bound(n, k, m)?;
    let r_lemma1 = (n == 3 && k == 3).then(|| lemma1_bound(m));
    let mut r_lb = r_theorem2.max(r_cutset);
    if let Some(l1) = r_lemma1 {
        r_lb = r_lb.max(l1);
    }
    Ok(GapRow {
        m,
        r_envelope,
        r_theorem2,
        r_cutset,
        r_lemma1,
        gap: r_envelope - r_lb,
        achieving_source: envelope.achieving_source(m).unwrap_or_default(),
    })
}

/// Rows over a uniform `grid_points`-point grid on [0, N] merged with all
/// envelope breakpoints, sorted by M.
pub fn tradeoff_rows(n: u32, k: u32, grid_points: usize) -> Result<Vec<GapRow>> {
    if grid_points < 2 {
        return Err(Error::InvalidParameter("grid needs at least 2 points".into()));
    }
    let envelope = lower_envelope(&atlas_points(n, k)?)?;
    let mut ms: Vec<Rational> = (0..grid_points)
        .map(|j| rat(i64::from(n), 1) * rat(j as i64, grid_points as i64 - 1))
        .collect();
    ms.extend(envelope.breakpoints().iter().map(|(m, _)| *m));
    ms.sort();
    ms.dedup();
    ms.iter().map(|&m| gap_row(n, k, m, &envelope)).collect()
}

/// Formats a rational as a decimal with 12 significant digits, trailing
/// zeros trimmed.
pub fn format_significant(x: Rational) -> String {
    let v = x.to_f64().unwrap_or(f64::NAN);
    if !v.is_finite() {
        return "NaN".into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (11 - mag).max(0) as usize;
    let s = format!("{:.*}", decimals, v);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// CSV serialization of gap rows (one row per grid point).
pub fn tradeoff_csv(rows: &[GapRow]) -> String {
    let mut out = String::from("M,R_envelope,R_theorem2,R_cutset,R_lemma1,gap,achieving_source\n");
    for row in rows {
        let lemma1 = row
            .r_lemma1
            .map(format_significant)
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            format_significant(row.m),
            format_significant(row.r_envelope),
            format_significant(row.r_theorem2),
            format_significant(row.r_cutset),
            lemma1,
            format_significant(row.gap),
            row.achieving_source,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem2_reference_values() {
        assert_eq!(theorem2_bound(3, rat(5, 3)).unwrap(), rat(1, 2));
        assert_eq!(theorem2_bound(3, rat(2, 1)).unwrap(), rat(1, 3));
        // Bound hits zero at M = (K²−1)/K.
        assert_eq!(theorem2_bound(4, rat(15, 4)).unwrap(), rat(0, 1));
        assert_eq!(theorem2_bound(4, rat(4, 1)).unwrap(), rat(0, 1));
    }

    #[test]
    fn lemma1_equals_theorem2_at_k3() {
        for num in 0..=30 {
            let m = rat(num, 10);
            assert_eq!(lemma1_bound(m), theorem2_bound(3, m).unwrap());
        }
    }

    #[test]
    fn cutset_reference_values() {
        assert_eq!(cutset_bound(3, 3, rat(0, 1)).unwrap(), rat(3, 1));
        assert_eq!(cutset_bound(3, 3, rat(3, 1)).unwrap(), rat(0, 1));
        // At M=1 the best cut is a single user: 1 − 1/3 = 2/3.
        assert_eq!(cutset_bound(3, 3, rat(1, 1)).unwrap(), rat(2, 3));
        assert_eq!(cutset_bound(3, 3, rat(1, 3)).unwrap(), rat(2, 1));
    }

    #[test]
    fn atlas_contains_reference_points() {
        let pts = atlas_points(3, 3).unwrap();
        let has = |m: Rational, r: Rational| pts.iter().any(|p| p.m == m && p.r == r);
        assert!(has(rat(1, 3), rat(2, 1))); // chen
        assert!(has(rat(5, 3), rat(1, 2))); // new coded point
        assert!(has(rat(1, 1), rat(1, 1))); // mn r=1
        assert!(has(rat(2, 1), rat(1, 3))); // mn r=2
        assert!(has(rat(1, 2), rat(5, 3))); // gomez q=2
    }

    #[test]
    fn envelope_of_full_k3_atlas_matches_known_breakpoints() {
        let env = lower_envelope(&atlas_points(3, 3).unwrap()).unwrap();
        let expect = [
            (rat(0, 1), rat(3, 1)),
            (rat(1, 3), rat(2, 1)),
            (rat(1, 2), rat(5, 3)),
            (rat(1, 1), rat(1, 1)),
            (rat(5, 3), rat(1, 2)),
            (rat(2, 1), rat(1, 3)),
            (rat(3, 1), rat(0, 1)),
        ];
        assert_eq!(env.breakpoints(), &expect);
    }

    #[test]
    fn envelope_single_point() {
        let env = lower_envelope(&[RatePoint::new(rat(1, 1), rat(2, 1), "p")]).unwrap();
        assert_eq!(env.breakpoints(), &[(rat(1, 1), rat(2, 1))]);
        assert_eq!(env.eval(rat(1, 1)), Some(rat(2, 1)));
        assert_eq!(env.eval(rat(2, 1)), None);
    }

    #[test]
    fn envelope_drops_collinear_middle_point() {
        let pts = [
            RatePoint::new(rat(0, 1), rat(2, 1), "a"),
            RatePoint::new(rat(1, 1), rat(1, 1), "mid"),
            RatePoint::new(rat(2, 1), rat(0, 1), "b"),
        ];
        let env = lower_envelope(&pts).unwrap();
        assert_eq!(env.breakpoints().len(), 2);
        assert_eq!(env.eval(rat(1, 1)), Some(rat(1, 1)));
    }

    #[test]
    fn envelope_rejects_empty_input() {
        assert!(lower_envelope(&[]).is_err());
    }

    #[test]
    fn envelope_is_convex_and_non_increasing() {
        for k in 2..=6 {
            let env = lower_envelope(&atlas_points(k, k).unwrap()).unwrap();
            let bp = env.breakpoints();
            for w in bp.windows(2) {
                assert!(w[1].0 > w[0].0);
                assert!(w[1].1 <= w[0].1, "envelope must not increase");
            }
            for w in bp.windows(3) {
                let s1 = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
                let s2 = (w[2].1 - w[1].1) / (w[2].0 - w[1].0);
                assert!(s2 > s1, "breakpoint slopes must strictly increase");
            }
        }
    }

    #[test]
    fn no_atlas_point_below_any_bound() {
        for k in 2..=6 {
            for p in atlas_points(k, k).unwrap() {
                let t2 = theorem2_bound(k, p.m).unwrap();
                let cs = cutset_bound(k, k, p.m).unwrap();
                assert!(p.r >= t2, "{} below theorem2 at K={k}", p.source);
                assert!(p.r >= cs, "{} below cutset at K={k}", p.source);
                if k == 3 {
                    assert!(p.r >= lemma1_bound(p.m));
                }
            }
        }
    }

    #[test]
    fn kk_point_sits_on_theorem2_line() {
        for k in 2..=8u32 {
            let p = kk_scheme_point(k).unwrap();
            let ki = i64::from(k);
            let lhs = rat(ki, 1) * p.m + rat(ki * (ki - 1), 1) * p.r;
            assert_eq!(lhs, rat(ki * ki - 1, 1));
        }
    }

    #[test]
    fn gap_is_zero_exactly_on_the_characterized_segment() {
        for k in [3u32, 4, 5] {
            let ki = i64::from(k);
            let lo = rat(ki * ki - ki - 1, ki);
            let hi = rat(ki - 1, 1);
            let grid: Vec<Rational> = (0..=20).map(|j| lo + (hi - lo) * rat(j, 20)).collect();
            for row in gap_report(k, k, &grid).unwrap() {
                assert_eq!(
                    row.gap,
                    rat(0, 1),
                    "K={k} M={} should be tight",
                    row.m
                );
            }
        }
    }

    #[test]
    fn gap_never_negative_on_full_range() {
        for k in 2..=6 {
            for row in tradeoff_rows(k, k, 31).unwrap() {
                assert!(row.gap >= rat(0, 1), "negative gap at K={k} M={}", row.m);
            }
        }
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(rat(1, 3)), "0.333333333333");
        assert_eq!(format_significant(rat(5, 3)), "1.66666666667");
        assert_eq!(format_significant(rat(2, 1)), "2");
        assert_eq!(format_significant(rat(0, 1)), "0");
        assert_eq!(format_significant(rat(1, 2)), "0.5");
        assert_eq!(format_significant(rat(-1, 3)), "-0.333333333333");
    }

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(binomial(0, 0), 1);
    }
}
