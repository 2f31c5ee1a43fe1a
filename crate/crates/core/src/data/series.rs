use indexmap::IndexMap;

use super::SystemDataset;
use crate::error::ValidationError;
use crate::temporal::{
    month_start, pick_days, Chronology, DailyProfile, DayKind, MonthSelection, TemporalStructure,
};

/// How calendar data is sampled into timepoints.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesLayout {
    /// The given day kinds of every month (36 horizons for max/median/min).
    Representative(Vec<DayKind>),
    /// The given day kinds of a subset of months; each sampled day then
    /// stands for a larger share of the year.
    Months { months: Vec<u8>, kinds: Vec<DayKind> },
    /// Every hour of the year.
    FullYear,
}

impl Default for SeriesLayout {
    fn default() -> Self {
        SeriesLayout::Representative(vec![DayKind::Max, DayKind::Median, DayKind::Min])
    }
}

/// Time series on a temporal structure: demand per zone (MW) and
/// capacity factors per VRE project, both indexed by timepoint.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTable {
    pub temporal: TemporalStructure,
    /// `[zone index][timepoint]`, zones in dataset order.
    pub demand: Vec<Vec<f64>>,
    pub capacity_factors: IndexMap<String, Vec<f64>>,
}

impl SeriesTable {
    pub fn new(
        temporal: TemporalStructure,
        demand: Vec<Vec<f64>>,
        capacity_factors: IndexMap<String, Vec<f64>>,
    ) -> Result<Self, ValidationError> {
        let n = temporal.len();
        temporal.validate()?;
        if demand.iter().any(|d| d.len() != n) || capacity_factors.values().any(|c| c.len() != n) {
            return Err(ValidationError::new(format!("series length differs from the {n} timepoints")));
        }
        Ok(Self {
            temporal,
            demand,
            capacity_factors,
        })
    }

    /// Samples the dataset's calendar data.
    pub fn from_calendar(ds: &SystemDataset, layout: &SeriesLayout) -> Result<Self, ValidationError> {
        let cal = ds
            .calendar
            .as_ref()
            .ok_or_else(|| ValidationError::new("dataset has no hourly calendar data"))?;
        let (temporal, hours): (TemporalStructure, Vec<usize>) = match layout {
            SeriesLayout::FullYear => (TemporalStructure::full_year(ds.period.clone()), (0..8760).collect()),
            SeriesLayout::Representative(_) | SeriesLayout::Months { .. } => {
                let (months, kinds): (Vec<u8>, &[DayKind]) = match layout {
                    SeriesLayout::Months { months, kinds } => {
                        if months.is_empty() || months.iter().any(|m| !(1..=12).contains(m)) || months.windows(2).any(|w| w[0] >= w[1]) {
                            return Err(ValidationError::new(format!("months must be increasing values in 1..=12, got {months:?}")));
                        }
                        (months.clone(), kinds)
                    }
                    SeriesLayout::Representative(kinds) => ((1..=12).collect(), kinds),
                    SeriesLayout::FullYear => unreachable!(),
                };
                let profile = system_profile(ds)?;
                let selections = months
                    .iter()
                    .map(|&m| {
                        let (max_day, median_day, min_day) = pick_days(&profile.month_totals(m))?;
                        Ok(MonthSelection {
                            month: m,
                            max_day,
                            median_day,
                            min_day,
                        })
                    })
                    .collect::<Result<Vec<_>, ValidationError>>()?;
                let temporal = TemporalStructure::representative(ds.period.clone(), &selections, kinds)?;
                let hours = temporal
                    .timepoints
                    .iter()
                    .map(|tp| {
                        let h = &temporal.horizons[tp.horizon];
                        let doy = month_start(h.month.expect("monthly")) + h.source_day.expect("sampled") as usize - 1;
                        doy * 24 + tp.hour_of_day as usize
                    })
                    .collect();
                (temporal, hours)
            }
        };
        let sample = |series: &Vec<f64>| hours.iter().map(|&h| series[h]).collect::<Vec<f64>>();
        let demand = ds
            .zones
            .iter()
            .map(|z| {
                cal.demand
                    .get(&z.id)
                    .map(sample)
                    .ok_or_else(|| ValidationError::new(format!("zone `{}` has no demand series", z.id)))
            })
            .collect::<Result<_, _>>()?;
        let cfs = cal
            .capacity_factors
            .iter()
            .map(|(k, v)| (k.clone(), sample(v)))
            .collect();
        Self::new(temporal, demand, cfs)
    }

    /// Unfolds representative values onto a full year through a chronology.
    pub fn expand(&self, chronology: &Chronology) -> Result<Self, ValidationError> {
        let map = &chronology.hour_to_timepoint;
        if map.len() != 8760 || map.iter().any(|&t| t >= self.temporal.len()) {
            return Err(ValidationError::new("chronology does not map 8760 hours onto this structure"));
        }
        let unfold = |v: &Vec<f64>| map.iter().map(|&t| v[t]).collect::<Vec<f64>>();
        Self::new(
            TemporalStructure::full_year(self.temporal.period.clone()),
            self.demand.iter().map(unfold).collect(),
            self.capacity_factors
                .iter()
                .map(|(k, v)| (k.clone(), unfold(v)))
                .collect(),
        )
    }

    pub fn zone_peak(&self, zone: usize) -> f64 {
        self.demand[zone].iter().copied().fold(0.0, f64::max)
    }

    /// Peak of the summed demand across zones.
    pub fn system_peak(&self) -> f64 {
        (0..self.temporal.len())
            .map(|t| self.demand.iter().map(|d| d[t]).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Σ_t demand × hours × weight, in MWh.
    pub fn annual_energy(&self, zone: usize) -> f64 {
        self.demand[zone]
            .iter()
            .enumerate()
            .map(|(t, d)| d * self.temporal.scale(t))
            .sum()
    }
}

/// Hourly system demand summed over zones.
pub fn system_profile(ds: &SystemDataset) -> Result<DailyProfile, ValidationError> {
    let cal = ds
        .calendar
        .as_ref()
        .ok_or_else(|| ValidationError::new("dataset has no hourly calendar data"))?;
    let mut hours = vec![[0.0; 24]; 365];
    for series in cal.demand.values() {
        for (i, v) in series.iter().enumerate() {
            hours[i / 24][i % 24] += v;
        }
    }
    Ok(DailyProfile { hours })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{quarterly_layout, regional_dataset};
    use crate::temporal::build_chronology;

    #[test]
    fn layout_sizes() {
        let ds = regional_dataset();
        let n = |layout: &SeriesLayout| SeriesTable::from_calendar(&ds, layout).unwrap().temporal.len();
        assert_eq!(n(&SeriesLayout::default()), 36 * 24);
        assert_eq!(n(&quarterly_layout()), 4 * 24);
        assert_eq!(n(&SeriesLayout::FullYear), 8760);
        for layout in [SeriesLayout::default(), quarterly_layout(), SeriesLayout::FullYear] {
            let s = SeriesTable::from_calendar(&ds, &layout).unwrap();
            assert!((s.temporal.weighted_hours() - 8760.0).abs() < 1e-9, "{layout:?}");
        }
    }

    #[test]
    fn full_year_keeps_calendar_energy() {
        let ds = regional_dataset();
        let s = SeriesTable::from_calendar(&ds, &SeriesLayout::FullYear).unwrap();
        let cal: f64 = ds.calendar.as_ref().unwrap().demand["north"].iter().sum();
        assert!((s.annual_energy(0) - cal).abs() < 1e-6 * cal);
    }

    #[test]
    fn month_lists_are_checked() {
        let ds = regional_dataset();
        for months in [vec![], vec![0], vec![13], vec![4, 1], vec![3, 3]] {
            let layout = SeriesLayout::Months { months: months.clone(), kinds: vec![DayKind::Median] };
            assert!(SeriesTable::from_calendar(&ds, &layout).is_err(), "{months:?}");
        }
    }

    #[test]
    fn expansion_repeats_sampled_days() {
        let ds = regional_dataset();
        let s = SeriesTable::from_calendar(&ds, &SeriesLayout::default()).unwrap();
        let chron = build_chronology(&s.temporal, Some(&system_profile(&ds).unwrap())).unwrap();
        let year = s.expand(&chron).unwrap();
        assert_eq!(year.temporal.len(), 8760);
        for (h, &t) in chron.hour_to_timepoint.iter().enumerate() {
            assert_eq!(year.demand[1][h], s.demand[1][t]);
        }
        assert!(year.system_peak() <= s.system_peak() + 1e-12);
    }

    #[test]
    fn lengths_must_match() {
        let ds = regional_dataset();
        let s = SeriesTable::from_calendar(&ds, &quarterly_layout()).unwrap();
        let short = vec![vec![1.0; 95], vec![1.0; 96]];
        assert!(SeriesTable::new(s.temporal.clone(), short, IndexMap::new()).is_err());
    }
}
