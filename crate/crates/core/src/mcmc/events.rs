use serde::Serialize;
use statrs::distribution::{Beta, ContinuousCDF};

use super::trajectory::TrajectorySummary;
use crate::error::{Error, Result};
use crate::graph::{ClassGroup, DyadClass};

/// Which formation events a rate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventSelector {
    Class(DyadClass),
    Group(ClassGroup),
}

impl EventSelector {
    pub fn label(self) -> &'static str {
        match self {
            EventSelector::Class(c) => c.label(),
            EventSelector::Group(g) => g.label(),
        }
    }

    fn matches(self, c: DyadClass) -> bool {
        match self {
            EventSelector::Class(k) => k == c,
            EventSelector::Group(g) => c.group() == g,
        }
    }
}

/// Posterior mean and 95% equal-tailed interval of a binomial rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateEstimate {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Jeffreys `Beta(1/2, 1/2)` prior updated with `count` successes in
/// `exposure` trials.
pub fn jeffreys_rate(count: u64, exposure: u64) -> Option<RateEstimate> {
    if exposure == 0 {
        return None;
    }
    let a = count as f64 + 0.5;
    let b = (exposure - count) as f64 + 0.5;
    let post = Beta::new(a, b).expect("positive shape parameters");
    Some(RateEstimate {
        mean: a / (a + b),
        lo: post.inverse_cdf(0.025),
        hi: post.inverse_cdf(0.975),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventBin {
    pub lo: f64,
    pub hi: f64,
    /// Sampled transitions whose pre-event `m` fell in the bin.
    pub exposure: u64,
    /// Formation events by dyad class.
    pub counts: [u64; 6],
}

impl EventBin {
    pub fn count(&self, sel: EventSelector) -> u64 {
        DyadClass::ALL
            .iter()
            .filter(|c| sel.matches(**c))
            .map(|c| self.counts[c.index()])
            .sum()
    }

    pub fn rate(&self, sel: EventSelector) -> Option<RateEstimate> {
        jeffreys_rate(self.count(sel), self.exposure)
    }

    pub fn is_populated(&self) -> bool {
        self.exposure > 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EventTally {
    pub bin_width: f64,
    pub bins: Vec<EventBin>,
}

impl EventTally {
    pub fn empty(bin_width: f64) -> Result<Self> {
        if !(bin_width > 0.0 && bin_width <= 1.0) {
            return Err(Error::Config(format!("bin width {bin_width} outside (0, 1]")));
        }
        let count = (1.0 / bin_width - 1e-9).ceil() as usize;
        let bins = (0..count)
            .map(|k| EventBin {
                lo: k as f64 * bin_width,
                hi: ((k + 1) as f64 * bin_width).min(1.0),
                exposure: 0,
                counts: [0; 6],
            })
            .collect();
        Ok(Self { bin_width, bins })
    }

    pub fn bin_of(&self, m: f64) -> usize {
        ((m / self.bin_width).floor() as usize).min(self.bins.len() - 1)
    }

    pub fn record(&mut self, m_before: f64, formed: bool, class: DyadClass) {
        let k = self.bin_of(m_before);
        let b = &mut self.bins[k];
        b.exposure += 1;
        if formed {
            b.counts[class.index()] += 1;
        }
    }

    pub fn merge(&mut self, other: &EventTally) {
        for (a, b) in self.bins.iter_mut().zip(&other.bins) {
            a.exposure += b.exposure;
            for k in 0..6 {
                a.counts[k] += b.counts[k];
            }
        }
    }

    pub fn populated(&self) -> impl Iterator<Item = &EventBin> {
        self.bins.iter().filter(|b| b.is_populated())
    }

    /// Populated bins where the two-pendant group's rate is not the smallest
    /// of the three groups.
    pub fn pp_violations(&self) -> Vec<&EventBin> {
        let rate = |b: &EventBin, g| b.rate(EventSelector::Group(g)).unwrap().mean;
        self.populated()
            .filter(|b| {
                let pp = rate(b, ClassGroup::TwoPendants);
                pp > rate(b, ClassGroup::NoPendant) || pp > rate(b, ClassGroup::OnePendant)
            })
            .collect()
    }

    /// Lower edge of the lowest populated bin, going up in `m`, at which the
    /// I-I rate is at least the I-C rate, provided I-C beats I-I in every
    /// populated bin below it. `None` if no such crossover exists.
    pub fn isolate_crossover(&self) -> Option<f64> {
        let ii = EventSelector::Class(DyadClass::II);
        let ic = EventSelector::Class(DyadClass::IC);
        let populated: Vec<&EventBin> = self.populated().collect();
        let first_ii = populated
            .iter()
            .position(|b| b.rate(ii).unwrap().mean >= b.rate(ic).unwrap().mean)?;
        (first_ii > 0).then(|| populated[first_ii].lo)
    }
}

/// Bins every sampled toggle by its pre-event order parameter and counts
/// formations by class.
pub fn tabulate_event_rates(trajectories: &[TrajectorySummary], bin_width: f64) -> Result<EventTally> {
    if trajectories.is_empty() {
        return Err(Error::Config("no trajectories to tabulate".into()));
    }
    let mut tally = EventTally::empty(bin_width)?;
    for t in trajectories {
        for e in &t.events {
            tally.record(e.m_before, e.formed, e.class);
        }
    }
    Ok(tally)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn jeffreys_shrinkage_with_no_events() {
        let r = jeffreys_rate(0, 100).unwrap();
        assert_relative_eq!(r.mean, 0.5 / 101.0);
        assert!(r.lo >= 0.0 && r.lo < r.mean && r.hi > r.mean && r.hi < 0.05);
        assert!(jeffreys_rate(0, 0).is_none());
    }

    #[test]
    fn jeffreys_interval_known_value() {
        // Beta(5.5, 5.5) is symmetric about one half
        let r = jeffreys_rate(5, 10).unwrap();
        assert_relative_eq!(r.mean, 0.5);
        assert_relative_eq!(r.lo + r.hi, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn binning_covers_unit_interval() {
        let t = EventTally::empty(0.02).unwrap();
        assert_eq!(t.bins.len(), 50);
        assert_eq!(t.bin_of(0.0), 0);
        assert_eq!(t.bin_of(1.0), 49);
        assert_eq!(t.bin_of(0.99), 49);
        assert_relative_eq!(t.bins[49].hi, 1.0);
        assert_eq!(EventTally::empty(0.3).unwrap().bins.len(), 4);
        assert!(EventTally::empty(0.0).is_err());
    }

    #[test]
    fn group_counts_and_crossover() {
        let mut t = EventTally::empty(0.5).unwrap();
        // high-m bin: isolates pair up
        for _ in 0..6 {
            t.record(0.9, true, DyadClass::II);
        }
        t.record(0.9, true, DyadClass::IC);
        t.record(0.9, false, DyadClass::PP);
        // low-m bin: isolates join the concurrent core
        for _ in 0..5 {
            t.record(0.2, true, DyadClass::IC);
        }
        t.record(0.2, true, DyadClass::PC);
        t.record(0.2, true, DyadClass::PI);
        let hi = &t.bins[1];
        assert_eq!(hi.exposure, 8);
        assert_eq!(hi.count(EventSelector::Group(ClassGroup::NoPendant)), 7);
        assert_eq!(hi.count(EventSelector::Group(ClassGroup::TwoPendants)), 0);
        assert_eq!(t.bins[0].count(EventSelector::Group(ClassGroup::OnePendant)), 2);
        assert_eq!(t.isolate_crossover(), Some(0.5));
        assert!(t.pp_violations().is_empty());
    }

    #[test]
    fn empty_set_rejected() {
        assert!(tabulate_event_rates(&[], 0.02).is_err());
    }
}
