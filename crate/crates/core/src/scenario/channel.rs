use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Point;

/// One MCS tier: at or above `threshold_db` SNR an RB carries `rate` units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McsEntry {
    #[serde(with = "threshold_serde")]
    pub threshold_db: f64,
    pub rate: f64,
}

/// Log-distance path loss with i.i.d. log-normal shadowing per
/// (camera, subchannel), quantized through an MCS table.
///
/// The defaults are implementation choices in the usual 3GPP macro-cell
/// range: 128.1 + 37.6·log10(d_km) dB, σ = 8 dB, 24 dBm transmit power,
/// thermal noise −174 dBm/Hz over a 180 kHz RB with a 5 dB noise figure, and
/// four QPSK..16QAM tiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChannelParams {
    pub tx_power_dbm: f64,
    pub pathloss_intercept_db: f64,
    pub pathloss_slope_db: f64,
    pub shadowing_sigma_db: f64,
    pub noise_figure_db: f64,
    pub rb_bandwidth_hz: f64,
    pub mcs_table: Vec<McsEntry>,
}

pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            tx_power_dbm: 24.0,
            pathloss_intercept_db: 128.1,
            pathloss_slope_db: 37.6,
            shadowing_sigma_db: 8.0,
            noise_figure_db: 5.0,
            rb_bandwidth_hz: 180_000.0,
            mcs_table: vec![
                McsEntry { threshold_db: -1.0, rate: 2.0 },
                McsEntry { threshold_db: 5.0, rate: 4.0 },
                McsEntry { threshold_db: 11.0, rate: 6.0 },
                McsEntry { threshold_db: 15.0, rate: 8.0 },
            ],
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.rb_bandwidth_hz > 0.0 && self.rb_bandwidth_hz.is_finite()) {
            return Err(Error::config("rb_bandwidth must be positive"));
        }
        if !(self.shadowing_sigma_db >= 0.0 && self.shadowing_sigma_db.is_finite()) {
            return Err(Error::config("shadowing_sigma must be non-negative"));
        }
        if self.mcs_table.is_empty() {
            return Err(Error::config("mcs_table must not be empty"));
        }
        for w in self.mcs_table.windows(2) {
            if !(w[0].threshold_db < w[1].threshold_db) {
                return Err(Error::config("mcs_table thresholds must be strictly increasing"));
            }
            if w[1].rate < w[0].rate {
                return Err(Error::config("mcs_table rates must be non-decreasing"));
            }
        }
        if self
            .mcs_table
            .iter()
            .any(|e| !(e.rate >= 0.0 && e.rate.is_finite()) || e.threshold_db.is_nan())
        {
            return Err(Error::config("mcs_table has an invalid entry"));
        }
        Ok(())
    }

    /// Receiver noise power over one RB, dBm.
    pub fn noise_floor_dbm(&self) -> f64 {
        THERMAL_NOISE_DBM_PER_HZ + 10.0 * self.rb_bandwidth_hz.log10() + self.noise_figure_db
    }

    /// Path loss in dB at `distance_m`, clamped to 1 m.
    pub fn path_loss_db(&self, distance_m: f64) -> f64 {
        let d_km = distance_m.max(1.0) / 1000.0;
        self.pathloss_intercept_db + self.pathloss_slope_db * d_km.log10()
    }

    /// Mean SNR (before shadowing) at `distance_m`.
    pub fn mean_snr_db(&self, distance_m: f64) -> f64 {
        self.tx_power_dbm - self.path_loss_db(distance_m) - self.noise_floor_dbm()
    }

    /// Highest table rate whose threshold does not exceed `snr_db`, else 0.
    pub fn quantize(&self, snr_db: f64) -> f64 {
        self.mcs_table
            .iter()
            .rev()
            .find(|e| e.threshold_db <= snr_db)
            .map_or(0.0, |e| e.rate)
    }
}

/// Per-subchannel rates for a camera at `position` served by a base station at
/// `base_station`. Draws exactly one standard normal per subchannel.
pub fn derive_rates<G: Rng + ?Sized>(
    position: Point,
    base_station: Point,
    num_subchannels: usize,
    channel: &ChannelParams,
    rng: &mut G,
) -> Vec<f64> {
    let mean = channel.mean_snr_db(position.distance(&base_station));
    (0..num_subchannels)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            channel.quantize(mean - channel.shadowing_sigma_db * z)
        })
        .collect()
}

mod threshold_serde {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *v == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
            Repr::Str(s) => Err(de::Error::custom(format!("bad threshold `{s}`"))),
        }
    }
}
