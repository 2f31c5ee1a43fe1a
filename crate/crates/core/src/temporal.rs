//! Periods, representative-day horizons and weighted timepoints.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::ValidationError;

pub const HOURS_PER_YEAR: u32 = 8760;
pub const DAYS_IN_MONTH: [u32; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Period {
    pub label: String,
    pub discount_rate: f64,
    pub dollar_year: u32,
    /// Base-year emissions used by fraction-of-base carbon caps.
    pub base_emissions_tonnes: Option<f64>,
}

impl Default for Period {
    fn default() -> Self {
        Self {
            label: "2050".into(),
            discount_rate: 0.08,
            dollar_year: 2020,
            base_emissions_tonnes: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DayKind {
    Max,
    Median,
    Min,
    /// Every calendar day of the horizon's scope (full-year chronology).
    Calendar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Horizon {
    pub id: usize,
    /// `None` for a horizon that stands in for every month.
    pub month: Option<u8>,
    pub day_kind: DayKind,
    /// Day of month the horizon was sampled from, when known.
    pub source_day: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timepoint {
    pub id: usize,
    pub horizon: usize,
    pub hour_of_day: u32,
    pub hours_in_tmp: u32,
    pub weight: f64,
}

/// Horizons and timepoints for one planning period.
///
/// Timepoints are stored grouped by horizon, horizons in chronological order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalStructure {
    pub period: Period,
    pub horizons: Vec<Horizon>,
    pub timepoints: Vec<Timepoint>,
}

/// `8760 / (n_timepoints × hours_in_tmp)`.
pub fn compute_timepoint_weight(n_timepoints: usize, hours_in_tmp: u32) -> Result<f64, ValidationError> {
    if n_timepoints == 0 || hours_in_tmp == 0 {
        return Err(ValidationError::new(format!(
            "timepoint weight needs positive inputs (got {n_timepoints} timepoints of {hours_in_tmp} h)"
        )));
    }
    Ok(HOURS_PER_YEAR as f64 / (n_timepoints as f64 * hours_in_tmp as f64))
}

impl TemporalStructure {
    /// Builds a uniformly weighted structure: each horizon gets
    /// `24 / hours_in_tmp` timepoints and every timepoint the same weight.
    pub fn uniform(period: Period, horizons: Vec<Horizon>, hours_in_tmp: u32) -> Result<Self, ValidationError> {
        if hours_in_tmp == 0 || 24 % hours_in_tmp != 0 {
            return Err(ValidationError::new(format!(
                "hours_in_tmp must divide 24 (got {hours_in_tmp})"
            )));
        }
        let per_horizon = (24 / hours_in_tmp) as usize;
        let weight = compute_timepoint_weight(per_horizon * horizons.len(), hours_in_tmp)?;
        let mut timepoints = Vec::with_capacity(per_horizon * horizons.len());
        let horizons: Vec<Horizon> = horizons
            .into_iter()
            .enumerate()
            .map(|(i, h)| Horizon { id: i, ..h })
            .collect();
        for h in &horizons {
            for k in 0..per_horizon {
                timepoints.push(Timepoint {
                    id: timepoints.len(),
                    horizon: h.id,
                    hour_of_day: k as u32 * hours_in_tmp,
                    hours_in_tmp,
                    weight,
                });
            }
        }
        Ok(Self {
            period,
            horizons,
            timepoints,
        })
    }

    /// Twelve months × the given day kinds, hourly.
    pub fn representative(period: Period, selections: &[MonthSelection], kinds: &[DayKind]) -> Result<Self, ValidationError> {
        let mut horizons = Vec::new();
        for sel in selections {
            let mut picked: Vec<(u32, DayKind)> = kinds.iter().map(|&k| (sel.day(k), k)).collect();
            // chronological within the month
            picked.sort();
            for (day, kind) in picked {
                horizons.push(Horizon {
                    id: 0,
                    month: Some(sel.month),
                    day_kind: kind,
                    source_day: Some(day),
                });
            }
        }
        Self::uniform(period, horizons, 1)
    }

    /// 365 calendar-day horizons of 24 weight-1 hours.
    pub fn full_year(period: Period) -> Self {
        let mut horizons = Vec::with_capacity(365);
        for (m, &days) in DAYS_IN_MONTH.iter().enumerate() {
            for d in 1..=days {
                horizons.push(Horizon {
                    id: 0,
                    month: Some(m as u8 + 1),
                    day_kind: DayKind::Calendar,
                    source_day: Some(d),
                });
            }
        }
        Self::uniform(period, horizons, 1).expect("365 × 24 layout is valid")
    }

    pub fn len(&self) -> usize {
        self.timepoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timepoints.is_empty()
    }

    /// Hours × weight for timepoint `t`: the share of the year it represents.
    pub fn scale(&self, t: usize) -> f64 {
        let tp = &self.timepoints[t];
        tp.hours_in_tmp as f64 * tp.weight
    }

    pub fn horizon_of(&self, t: usize) -> &Horizon {
        &self.horizons[self.timepoints[t].horizon]
    }

    pub fn month_of(&self, t: usize) -> Option<u8> {
        self.horizon_of(t).month
    }

    /// Timepoint ids of one horizon in order.
    pub fn horizon_timepoints(&self, horizon: usize) -> Vec<usize> {
        self.timepoints
            .iter()
            .filter(|tp| tp.horizon == horizon)
            .map(|tp| tp.id)
            .collect()
    }

    /// Previous timepoint with wrap-around inside the horizon (timepoints of a
    /// horizon are contiguous).
    pub fn prev_in_horizon(&self, t: usize) -> usize {
        let h = self.timepoints[t].horizon;
        if t > 0 && self.timepoints[t - 1].horizon == h {
            return t - 1;
        }
        let mut last = t;
        while last + 1 < self.timepoints.len() && self.timepoints[last + 1].horizon == h {
            last += 1;
        }
        last
    }

    /// Previous timepoint in period-wide chronological order, cyclic over the year.
    pub fn prev_in_period(&self, t: usize) -> usize {
        (t + self.timepoints.len() - 1) % self.timepoints.len()
    }

    /// Σ weight × hours in floating point.
    pub fn weighted_hours(&self) -> f64 {
        (0..self.len()).map(|t| self.scale(t)).sum()
    }

    /// Σ weight × hours in rational arithmetic, reconstructing each weight
    /// exactly from the formula `8760 / (n × hours_in_tmp)`.
    pub fn weighted_hours_exact(&self) -> Ratio<i64> {
        let n = self.timepoints.len() as i64;
        self.timepoints
            .iter()
            .map(|tp| {
                let h = tp.hours_in_tmp as i64;
                Ratio::new(HOURS_PER_YEAR as i64, n * h) * Ratio::from_integer(h)
            })
            .sum()
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        if self.timepoints.is_empty() {
            return Err(ValidationError::new("temporal structure has no timepoints"));
        }
        if self.period.discount_rate < 0.0 {
            return Err(ValidationError::new("discount rate must be non-negative"));
        }
        for (i, tp) in self.timepoints.iter().enumerate() {
            if tp.id != i || tp.horizon >= self.horizons.len() {
                return Err(ValidationError::new(format!("timepoint {i} is mis-indexed")));
            }
            if i > 0 && tp.horizon < self.timepoints[i - 1].horizon {
                return Err(ValidationError::new(format!(
                    "timepoint {i} breaks horizon grouping"
                )));
            }
            if !(tp.weight > 0.0) || tp.hours_in_tmp == 0 {
                return Err(ValidationError::new(format!(
                    "timepoint {i} needs positive weight and hours"
                )));
            }
        }
        let total = self.weighted_hours();
        if (total - HOURS_PER_YEAR as f64).abs() > 1e-9 * HOURS_PER_YEAR as f64 {
            return Err(ValidationError::new(format!(
                "timepoints represent {total} h instead of 8760"
            )));
        }
        Ok(())
    }
}

/// Hourly system demand for one calendar year, indexed `[day_of_year][hour]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DailyProfile {
    pub hours: Vec<[f64; 24]>,
}

impl DailyProfile {
    pub fn day_total(&self, day_of_year: usize) -> f64 {
        self.hours[day_of_year].iter().sum()
    }

    pub fn month_totals(&self, month: u8) -> Vec<f64> {
        let start = month_start(month);
        (0..DAYS_IN_MONTH[month as usize - 1] as usize)
            .map(|d| self.day_total(start + d))
            .collect()
    }
}

/// Index of the first day of `month` (1-based) in a 365-day year.
pub fn month_start(month: u8) -> usize {
    DAYS_IN_MONTH[..month as usize - 1].iter().sum::<u32>() as usize
}

/// Days picked for one month (1-based day-of-month numbers).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonthSelection {
    pub month: u8,
    pub max_day: u32,
    pub median_day: u32,
    pub min_day: u32,
}

impl MonthSelection {
    pub fn day(&self, kind: DayKind) -> u32 {
        match kind {
            DayKind::Max => self.max_day,
            DayKind::Median | DayKind::Calendar => self.median_day,
            DayKind::Min => self.min_day,
        }
    }
}

/// Days of a month ordered by ascending total demand, ties by day index.
fn ascending_order(totals: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..totals.len()).collect();
    order.sort_by(|&a, &b| totals[a].total_cmp(&totals[b]).then(a.cmp(&b)));
    order
}

/// Picks the max-, median- and min-demand day from per-day totals of one month.
///
/// Ties go to the lowest day index; for an even number of days the median is
/// the lower of the two middle values. Returns 1-based day numbers.
pub fn pick_days(totals: &[f64]) -> Result<(u32, u32, u32), ValidationError> {
    if totals.len() < 3 {
        return Err(ValidationError::new(format!(
            "need at least 3 complete days, got {}",
            totals.len()
        )));
    }
    let order = ascending_order(totals);
    let first_with = |value: f64| (0..totals.len()).find(|&d| totals[d] == value).expect("present");
    let min = order[0];
    let median = first_with(totals[order[(totals.len() - 1) / 2]]);
    let max = first_with(totals[order[totals.len() - 1]]);
    Ok((max as u32 + 1, median as u32 + 1, min as u32 + 1))
}

/// Selects representative days for every month.
///
/// `hourly` holds `(month, day, hour, demand)` rows of system demand; rows for
/// the same hour are summed (zones). Months with missing hours are rejected
/// with the list of gaps.
pub fn select_representative_days(hourly: &[(u8, u32, u32, f64)]) -> Result<Vec<MonthSelection>, ValidationError> {
    let profile = daily_profile_from_rows(hourly)?;
    (1..=12u8)
        .map(|m| {
            let (max_day, median_day, min_day) = pick_days(&profile.month_totals(m))
                .map_err(|e| ValidationError::new(format!("month {m}: {}", e.message)))?;
            Ok(MonthSelection {
                month: m,
                max_day,
                median_day,
                min_day,
            })
        })
        .collect()
}

/// Aggregates `(month, day, hour, value)` rows into a full-year profile,
/// listing every missing hour on failure.
pub fn daily_profile_from_rows(rows: &[(u8, u32, u32, f64)]) -> Result<DailyProfile, ValidationError> {
    let mut hours = vec![[0.0; 24]; 365];
    let mut seen = vec![[false; 24]; 365];
    for &(m, d, h, v) in rows {
        if !(1..=12).contains(&m) || d == 0 || d > DAYS_IN_MONTH[m as usize - 1] || h > 23 {
            return Err(ValidationError::new(format!(
                "no such calendar hour: month {m}, day {d}, hour {h}"
            )));
        }
        let doy = month_start(m) + d as usize - 1;
        hours[doy][h as usize] += v;
        seen[doy][h as usize] = true;
    }
    let mut missing = Vec::new();
    for m in 1..=12u8 {
        for d in 1..=DAYS_IN_MONTH[m as usize - 1] {
            let doy = month_start(m) + d as usize - 1;
            for h in 0..24 {
                if !seen[doy][h] {
                    missing.push(format!("{m:02}-{d:02} {h:02}h"));
                }
            }
        }
    }
    if !missing.is_empty() {
        let shown: Vec<_> = missing.iter().take(12).cloned().collect();
        return Err(ValidationError::new(format!(
            "incomplete hourly series: {} missing hours ({}{})",
            missing.len(),
            shown.join(", "),
            if missing.len() > 12 { ", ..." } else { "" }
        )));
    }
    Ok(DailyProfile { hours })
}

/// Mapping from the 8760 calendar hours to representative timepoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Chronology {
    pub hour_to_timepoint: Vec<usize>,
}

impl Chronology {
    /// Calendar hours mapped onto each timepoint.
    pub fn counts(&self, n_timepoints: usize) -> Vec<usize> {
        let mut counts = vec![0; n_timepoints];
        for &t in &self.hour_to_timepoint {
            counts[t] += 1;
        }
        counts
    }
}

/// Maps every calendar day onto a horizon of the same month and every hour
/// onto the timepoint covering that hour of day.
///
/// Within a month, days are ranked by total demand (highest first, ties by
/// day index). Each day goes to the candidate horizon whose sampled day has
/// the nearest rank; without a profile, days rank in calendar order.
pub fn build_chronology(temporal: &TemporalStructure, profile: Option<&DailyProfile>) -> Result<Chronology, ValidationError> {
    let mut hour_to_timepoint = Vec::with_capacity(HOURS_PER_YEAR as usize);
    for m in 1..=12u8 {
        let mut candidates: Vec<&Horizon> = temporal
            .horizons
            .iter()
            .filter(|h| h.month == Some(m))
            .collect();
        if candidates.is_empty() {
            candidates = temporal.horizons.iter().filter(|h| h.month.is_none()).collect();
        }
        if candidates.is_empty() {
            return Err(ValidationError::new(format!("no horizon covers month {m}")));
        }
        let days = DAYS_IN_MONTH[m as usize - 1] as usize;
        let totals: Vec<f64> = match profile {
            Some(p) => p.month_totals(m),
            None => vec![0.0; days],
        };
        // rank 0 = highest demand
        let mut by_rank: Vec<usize> = (0..days).collect();
        by_rank.sort_by(|&a, &b| totals[b].total_cmp(&totals[a]).then(a.cmp(&b)));
        let mut rank_of = vec![0usize; days];
        for (r, &d) in by_rank.iter().enumerate() {
            rank_of[d] = r;
        }
        let anchor_rank = |h: &Horizon| -> usize {
            match (h.source_day, h.day_kind) {
                (Some(d), _) if (d as usize) <= days && d > 0 => rank_of[d as usize - 1],
                (_, DayKind::Max) => 0,
                (_, DayKind::Min) => days - 1,
                _ => (days - 1) / 2,
            }
        };
        for d in 0..days {
            let r = rank_of[d] as i64;
            let horizon = candidates
                .iter()
                .min_by_key(|h| ((anchor_rank(h) as i64 - r).abs(), h.id))
                .expect("non-empty");
            let members = temporal.horizon_timepoints(horizon.id);
            for hour in 0..24u32 {
                let t = members
                    .iter()
                    .copied()
                    .find(|&t| {
                        let tp = &temporal.timepoints[t];
                        tp.hour_of_day <= hour && hour < tp.hour_of_day + tp.hours_in_tmp
                    })
                    .ok_or_else(|| {
                        ValidationError::new(format!(
                            "horizon {} has no timepoint covering hour {hour}",
                            horizon.id
                        ))
                    })?;
                hour_to_timepoint.push(t);
            }
        }
    }
    Ok(Chronology { hour_to_timepoint })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn weight_formula() {
        assert_eq!(compute_timepoint_weight(8760, 1).unwrap(), 1.0);
        // 36 days × 24 h
        assert_close(compute_timepoint_weight(864, 1).unwrap(), 10.138888888888889, 1e-12);
        assert_eq!(compute_timepoint_weight(365, 24).unwrap(), 1.0);
        assert!(compute_timepoint_weight(0, 1).is_err());
        assert!(compute_timepoint_weight(10, 0).is_err());
    }

    #[test]
    fn increasing_month_picks_ends_and_lower_middle() {
        let totals: Vec<f64> = (1..=30).map(|d| d as f64).collect();
        assert_eq!(pick_days(&totals).unwrap(), (30, 15, 1));
    }

    #[test]
    fn identical_days_pick_first() {
        assert_eq!(pick_days(&[5.0; 28]).unwrap(), (1, 1, 1));
    }

    #[test]
    fn four_day_month_uses_lower_middle_value() {
        // sorted 2 (day 3) < 5 (day 1) < 7 (day 4) < 9 (day 2); lower middle = 5
        assert_eq!(pick_days(&[5.0, 9.0, 2.0, 7.0]).unwrap(), (2, 1, 3));
    }

    #[test]
    fn too_few_days_rejected() {
        assert!(pick_days(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn missing_hours_are_listed() {
        let mut rows = Vec::new();
        for m in 1..=12u8 {
            for d in 1..=DAYS_IN_MONTH[m as usize - 1] {
                for h in 0..24 {
                    if !(m == 2 && d == 3 && h == 7) {
                        rows.push((m, d, h, 1.0));
                    }
                }
            }
        }
        let err = select_representative_days(&rows).unwrap_err();
        assert!(err.message.contains("02-03 07h"), "{}", err.message);
    }

    #[test]
    fn representative_layout_weights_sum_to_year() {
        let sel: Vec<MonthSelection> = (1..=12)
            .map(|m| MonthSelection {
                month: m,
                max_day: 3,
                median_day: 10,
                min_day: 20,
            })
            .collect();
        let ts = TemporalStructure::representative(
            Period::default(),
            &sel,
            &[DayKind::Max, DayKind::Median, DayKind::Min],
        )
        .unwrap();
        assert_eq!(ts.horizons.len(), 36);
        assert_eq!(ts.len(), 864);
        assert_eq!(ts.weighted_hours_exact(), Ratio::from_integer(8760));
        ts.validate().unwrap();
    }

    #[test]
    fn full_year_chronology_is_identity() {
        let ts = TemporalStructure::full_year(Period::default());
        let chrono = build_chronology(&ts, None).unwrap();
        assert_eq!(chrono.hour_to_timepoint, (0..8760).collect::<Vec<_>>());
    }

    #[test]
    fn single_horizon_maps_every_day() {
        let ts = TemporalStructure::uniform(
            Period::default(),
            vec![Horizon {
                id: 0,
                month: None,
                day_kind: DayKind::Median,
                source_day: None,
            }],
            1,
        )
        .unwrap();
        let chrono = build_chronology(&ts, None).unwrap();
        assert_eq!(chrono.hour_to_timepoint.len(), 8760);
        for (hour, &t) in chrono.hour_to_timepoint.iter().enumerate() {
            assert_eq!(ts.timepoints[t].hour_of_day as usize, hour % 24);
        }
        // weight 365 per hour-of-day timepoint, matched exactly
        for (t, c) in chrono.counts(ts.len()).into_iter().enumerate() {
            assert_eq!(c as f64, ts.scale(t));
        }
    }

    #[test]
    fn prev_links_wrap() {
        let ts = TemporalStructure::uniform(
            Period::default(),
            vec![
                Horizon { id: 0, month: Some(1), day_kind: DayKind::Max, source_day: None },
                Horizon { id: 0, month: Some(7), day_kind: DayKind::Max, source_day: None },
            ],
            6,
        )
        .unwrap();
        assert_eq!(ts.len(), 8);
        assert_eq!(ts.prev_in_horizon(4), 7);
        assert_eq!(ts.prev_in_horizon(5), 4);
        assert_eq!(ts.prev_in_period(0), 7);
        assert_eq!(ts.prev_in_period(4), 3);
        assert_eq!(ts.weighted_hours_exact(), Ratio::from_integer(8760));
    }
}
