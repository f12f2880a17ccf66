//! Walk-forward cross-validation schedules.

use alloc::string::String;
use alloc::vec::Vec;

use chrono::NaiveDate;

use crate::error::{Error, Result};

/// Minimum train-to-validation gap in weeks.
pub const MIN_VALIDATION_GAP_WEEKS: i64 = 52;
/// Minimum validation-to-test gap in weeks.
pub const MIN_TEST_GAP_WEEKS: i64 = 26;

/// Segment of a scheme a week falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Period {
    Train,
    TrainValidationGap,
    Validation,
    ValidationTestGap,
    Test,
    Outside,
}

/// Inclusive date ranges of one walk-forward split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CvScheme {
    pub name: String,
    pub train_start: NaiveDate,
    pub train_end: NaiveDate,
    pub validation_start: NaiveDate,
    pub validation_end: NaiveDate,
    pub test_start: NaiveDate,
    pub test_end: NaiveDate,
}

/// Whole weeks between two dates.
pub fn weeks_between(from: NaiveDate, to: NaiveDate) -> i64 {
    (to - from).num_days().div_euclid(7)
}

impl CvScheme {
    pub fn from_dates(name: impl Into<String>, d: [NaiveDate; 6]) -> Self {
        Self {
            name: name.into(),
            train_start: d[0],
            train_end: d[1],
            validation_start: d[2],
            validation_end: d[3],
            test_start: d[4],
            test_end: d[5],
        }
    }

    pub fn dates(&self) -> [NaiveDate; 6] {
        [
            self.train_start,
            self.train_end,
            self.validation_start,
            self.validation_end,
            self.test_start,
            self.test_end,
        ]
    }

    /// Checks ordering and the minimum gaps.
    pub fn validate(&self) -> Result<()> {
        let d = self.dates();
        if d.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Config(alloc::format!("{}: dates out of order", self.name)));
        }
        let gap = weeks_between(self.train_end, self.validation_start);
        if self.train_end >= self.validation_start || gap < MIN_VALIDATION_GAP_WEEKS {
            return Err(Error::Config(alloc::format!(
                "{}: train/validation gap of {gap} weeks is below {MIN_VALIDATION_GAP_WEEKS}",
                self.name
            )));
        }
        let gap = weeks_between(self.validation_end, self.test_start);
        if self.validation_end >= self.test_start || gap < MIN_TEST_GAP_WEEKS {
            return Err(Error::Config(alloc::format!(
                "{}: validation/test gap of {gap} weeks is below {MIN_TEST_GAP_WEEKS}",
                self.name
            )));
        }
        Ok(())
    }

    pub fn period_of(&self, week: NaiveDate) -> Period {
        if week < self.train_start || week > self.test_end {
            Period::Outside
        } else if week <= self.train_end {
            Period::Train
        } else if week < self.validation_start {
            Period::TrainValidationGap
        } else if week <= self.validation_end {
            Period::Validation
        } else if week < self.test_start {
            Period::ValidationTestGap
        } else {
            Period::Test
        }
    }
}

const fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
    match NaiveDate::from_ymd_opt(y, m, d) {
        Some(date) => date,
        None => panic!("invalid date"),
    }
}

/// The five default expanding-window splits.
pub const DEFAULT_SCHEDULE: [[NaiveDate; 6]; 5] = [
    [ymd(2003, 1, 31), ymd(2010, 12, 31), ymd(2012, 1, 6), ymd(2015, 12, 25), ymd(2016, 7, 1), ymd(2021, 12, 31)],
    [ymd(2003, 1, 31), ymd(2012, 1, 6), ymd(2013, 1, 11), ymd(2016, 12, 30), ymd(2017, 6, 30), ymd(2021, 12, 31)],
    [ymd(2003, 1, 31), ymd(2013, 1, 4), ymd(2014, 1, 10), ymd(2017, 12, 29), ymd(2018, 6, 29), ymd(2021, 12, 31)],
    [ymd(2003, 1, 31), ymd(2014, 1, 3), ymd(2015, 1, 9), ymd(2018, 12, 28), ymd(2019, 6, 28), ymd(2021, 12, 31)],
    [ymd(2003, 1, 31), ymd(2015, 1, 2), ymd(2016, 1, 8), ymd(2019, 12, 27), ymd(2020, 6, 26), ymd(2021, 12, 31)],
];

/// Builds named schemes `cv0, cv1, ..` from date rows and checks the gap
/// rules, a common train start and non-shrinking train ends.
pub fn make_cv_schemes(rows: &[[NaiveDate; 6]]) -> Result<Vec<CvScheme>> {
    if rows.is_empty() {
        return Err(Error::Config(String::from("no cross-validation schemes configured")));
    }
    let schemes: Vec<CvScheme> =
        rows.iter().enumerate().map(|(i, d)| CvScheme::from_dates(alloc::format!("cv{i}"), *d)).collect();
    for (i, s) in schemes.iter().enumerate() {
        s.validate()?;
        if s.train_start != schemes[0].train_start {
            return Err(Error::Config(alloc::format!("{}: train start differs from cv0", s.name)));
        }
        if i > 0 && s.train_end < schemes[i - 1].train_end {
            return Err(Error::Config(alloc::format!("{}: train window shrinks", s.name)));
        }
    }
    Ok(schemes)
}

pub fn default_cv_schemes() -> Vec<CvScheme> {
    make_cv_schemes(&DEFAULT_SCHEDULE).expect("default schedule is valid")
}
