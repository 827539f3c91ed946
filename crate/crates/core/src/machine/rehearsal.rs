use std::time::Duration;

/// Calendar unit of one rehearsal entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalendarUnit {
    Hour,
    Day,
    Week,
    /// 30 days.
    Month,
    /// 365 days.
    Year,
}

impl CalendarUnit {
    pub fn hours(self) -> u64 {
        match self {
            CalendarUnit::Hour => 1,
            CalendarUnit::Day => 24,
            CalendarUnit::Week => 7 * 24,
            CalendarUnit::Month => 30 * 24,
            CalendarUnit::Year => 365 * 24,
        }
    }
}

/// Offsets, measured from the initial memorization, at which an item is rehearsed.
#[derive(Debug, Clone, PartialEq)]
pub struct RehearsalSchedule {
    pub entries: Vec<(u32, CalendarUnit)>,
    pub unit: Duration,
}

const DOUBLING_BLOCKS: [(CalendarUnit, &[u32]); 5] = [
    (CalendarUnit::Hour, &[1, 2, 4, 8, 16]),
    (CalendarUnit::Day, &[1, 2, 4]),
    (CalendarUnit::Week, &[1, 2]),
    (CalendarUnit::Month, &[1, 2, 4, 8]),
    (CalendarUnit::Year, &[1, 2, 4, 8, 16, 32, 64]),
];

impl RehearsalSchedule {
    /// Offsets as durations; one calendar hour is scaled to `unit`.
    pub fn offsets(&self) -> Vec<Duration> {
        self.entries
            .iter()
            .map(|&(count, cal)| self.unit * (count * cal.hours() as u32))
            .collect()
    }

    /// Gaps between successive offsets, the first measured from zero.
    pub fn gaps(&self) -> Vec<Duration> {
        let offsets = self.offsets();
        let mut prev = Duration::ZERO;
        offsets
            .into_iter()
            .map(|o| {
                let gap = o - prev;
                prev = o;
                gap
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The 21-entry doubling schedule, with one hour scaled to `unit`.
pub fn rehearsal_times(unit: Duration) -> RehearsalSchedule {
    let entries = DOUBLING_BLOCKS
        .iter()
        .flat_map(|(cal, counts)| counts.iter().map(move |&c| (c, *cal)))
        .collect();
    RehearsalSchedule { entries, unit }
}
