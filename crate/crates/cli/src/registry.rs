//! Named scenarios: the figure-analog experiments this binary can run.

use crate::scenarios::{self, RunContext, RunResult};

pub struct Scenario {
    pub name: &'static str,
    pub description: &'static str,
    pub keys: &'static [&'static str],
    pub run: fn(&mut RunContext) -> RunResult,
}

/// Registry sorted by name.
pub fn scenarios() -> Vec<Scenario> {
    let mut list = vec![
        Scenario {
            name: "fig2_resalloc",
            description: "multi-user SWIPT: information efficiency vs required energy-transfer efficiency (linear, saturating, mismatched, zero-forcing)",
            keys: scenarios::resalloc::KEYS,
            run: scenarios::resalloc::run,
        },
        Scenario {
            name: "fig7_chirp_harvest",
            description: "average harvested energy vs transmit antennas: superimposed chirps against the multisine baseline",
            keys: scenarios::waveform::KEYS,
            run: scenarios::waveform::run_harvest,
        },
        Scenario {
            name: "fig8_rate_energy",
            description: "energy/information trade across the chirp superposition count at fixed antennas",
            keys: scenarios::waveform::KEYS,
            run: scenarios::waveform::run_rate_energy,
        },
        Scenario {
            name: "fig10_placement",
            description: "optimal symmetric transmit placement across room aspect ratios",
            keys: scenarios::nearfield::KEYS,
            run: scenarios::nearfield::run_placement,
        },
        Scenario {
            name: "fig11_gain",
            description: "worst-case power gain of optimal placement over the wall-center placement",
            keys: scenarios::nearfield::KEYS,
            run: scenarios::nearfield::run_gain,
        },
        Scenario {
            name: "fig12_hp_irs",
            description: "hybrid min-power with a reflecting surface: optimized vs random vs no surface across element counts",
            keys: scenarios::surf::KEYS,
            run: scenarios::surf::run_hp,
        },
        Scenario {
            name: "fig14_15_modes",
            description: "self-sustainable surface operation modes: receiver and surface harvest vs transmit power",
            keys: scenarios::surf::KEYS,
            run: scenarios::surf::run_modes,
        },
        Scenario {
            name: "fig17_18_fluidra",
            description: "fluid antenna selection vs conventional arrays: outage and harvest under both priorities",
            keys: scenarios::fluidra::KEYS,
            run: scenarios::fluidra::run,
        },
        Scenario {
            name: "fig20_thz_tradeoff",
            description: "THz rate-power trade: optimal input distributions against the truncated-Gaussian baseline",
            keys: scenarios::thz::KEYS,
            run: scenarios::thz::run,
        },
        Scenario {
            name: "sec7_fnbs",
            description: "far/near two-phase beam scan power trace on a LoS link",
            keys: scenarios::nearfield::KEYS,
            run: scenarios::nearfield::run_fnbs,
        },
        Scenario {
            name: "sec7_mtbs",
            description: "multi-tile surface beam scan driven by received-power feedback",
            keys: scenarios::surf::KEYS,
            run: scenarios::surf::run_mtbs,
        },
        Scenario {
            name: "sec7_multifocus",
            description: "multi-focus surface patterns (pattern addition, random interleaving, tile division) across weights",
            keys: scenarios::surf::KEYS,
            run: scenarios::surf::run_multifocus,
        },
        Scenario {
            name: "sec7_bsa",
            description: "beam sharing: leakage suppression at the data user while both delivery links are served",
            keys: scenarios::surf::KEYS,
            run: scenarios::surf::run_bsa,
        },
    ];
    list.sort_by_key(|s| s.name);
    list
}

pub fn find(name: &str) -> Option<Scenario> {
    scenarios().into_iter().find(|s| s.name == name)
}
