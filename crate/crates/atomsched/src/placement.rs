//! Qubit-to-site assignment with an occupancy index.
//!
//! A `Placement` is total: every qubit of the circuit is always at exactly
//! one site. The inverse index is kept consistent on every update. Capacity
//! rules (two qubits on a compute site only as an interacting pair, one per
//! storage site) are checked by the router, which knows the active stage.

use std::collections::BTreeMap;

use crate::circuit::QubitId;
use crate::hardware::{Site, Zone};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    qubit_site: Vec<Site>,
    occupants: BTreeMap<Site, Vec<QubitId>>,
}

impl Placement {
    /// Builds a placement from per-qubit sites (index = qubit id).
    pub fn from_sites(sites: Vec<Site>) -> Self {
        let mut occupants: BTreeMap<Site, Vec<QubitId>> = BTreeMap::new();
        for (i, &s) in sites.iter().enumerate() {
            occupants.entry(s).or_default().push(QubitId(i as u32));
        }
        Self {
            qubit_site: sites,
            occupants,
        }
    }

    pub fn num_qubits(&self) -> u32 {
        self.qubit_site.len() as u32
    }

    pub fn site_of(&self, q: QubitId) -> Site {
        self.qubit_site[q.index()]
    }

    pub fn sites(&self) -> &[Site] {
        &self.qubit_site
    }

    /// Qubits currently at `site`, in ascending id order.
    pub fn occupants_of(&self, site: Site) -> &[QubitId] {
        self.occupants
            .get(&site)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn occupancy(&self, site: Site) -> usize {
        self.occupants_of(site).len()
    }

    pub fn is_unoccupied(&self, site: Site) -> bool {
        self.occupancy(site) == 0
    }

    /// Relocates one qubit, keeping the inverse index consistent.
    pub fn relocate(&mut self, q: QubitId, to: Site) {
        let from = self.qubit_site[q.index()];
        if from == to {
            return;
        }
        let entry = self.occupants.get_mut(&from).expect("index consistent");
        entry.retain(|&x| x != q);
        if entry.is_empty() {
            self.occupants.remove(&from);
        }
        let dest = self.occupants.entry(to).or_default();
        let pos = dest.partition_point(|&x| x < q);
        dest.insert(pos, q);
        self.qubit_site[q.index()] = to;
    }

    /// Sites currently over hard capacity (compute > 2 or storage > 1).
    pub fn overfull_sites(&self) -> Vec<(Site, usize)> {
        self.occupants
            .iter()
            .filter(|(s, qs)| match s.zone {
                Zone::Compute => qs.len() > 2,
                Zone::Storage => qs.len() > 1,
            })
            .map(|(s, qs)| (*s, qs.len()))
            .collect()
    }

    /// Occupied sites with their occupants, in site order.
    pub fn occupied_sites(&self) -> impl Iterator<Item = (Site, &[QubitId])> {
        self.occupants.iter().map(|(s, qs)| (*s, qs.as_slice()))
    }
}
