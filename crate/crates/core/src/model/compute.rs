use super::{MecParams, Task, UserEquipment};
use crate::error::{Error, Result};

/// Aggregate frequency of `k_comp` computation units. Zero means the task
/// cannot run on the server.
pub fn mec_equiv_frequency(k_comp: u32, mec: &MecParams) -> f64 {
    f64::from(k_comp) * mec.unit_freq
}

pub fn local_processing_time(task: &Task, ue: &UserEquipment) -> Result<f64> {
    if !(ue.local_cpu_freq > 0.0) {
        return Err(Error::invalid(
            "local_cpu_freq",
            format!("must be positive, got {}", ue.local_cpu_freq),
        ));
    }
    Ok(task.cycles / ue.local_cpu_freq)
}

pub fn mec_processing_time(task: &Task, f_equiv: f64) -> Result<f64> {
    if !(f_equiv > 0.0) {
        return Err(Error::NoComputeUnits);
    }
    Ok(task.cycles / f_equiv)
}

pub fn local_energy(ue: &UserEquipment, t_local: f64) -> f64 {
    ue.local_process_power * t_local
}

/// Device-side energy of an offload: transmit, then idle while the server works.
pub fn mec_energy(ue: &UserEquipment, t_trans: f64, t_mec: f64) -> f64 {
    ue.tx_power * t_trans + ue.idle_power * t_mec
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SliceId;
    use approx::assert_relative_eq;

    fn task(cycles: f64) -> Task {
        Task {
            slice: SliceId::Mmtc,
            bytes: 1.0,
            cycles,
            deadline: None,
        }
    }

    fn ue(freq: f64, p_proc: f64) -> UserEquipment {
        UserEquipment {
            distance: 100.0,
            local_cpu_freq: freq,
            tx_power: 0.2,
            local_process_power: p_proc,
            idle_power: 0.0,
        }
    }

    #[test]
    fn equivalent_frequency() {
        let mec = MecParams {
            unit_freq: 2e8,
            total_comp_units: 40,
            total_comm_rbs: 80,
        };
        assert_eq!(mec_equiv_frequency(0, &mec), 0.0);
        assert_eq!(mec_equiv_frequency(1, &mec), 2e8);
        assert_eq!(mec_equiv_frequency(10, &mec), 2e9);
    }

    #[test]
    fn processing_times() {
        assert_relative_eq!(local_processing_time(&task(1.8e8), &ue(6e8, 0.0)).unwrap(), 0.3, max_relative = 1e-12);
        assert_relative_eq!(local_processing_time(&task(2.2e8), &ue(2e8, 0.4)).unwrap(), 1.1, max_relative = 1e-12);
        assert_eq!(local_processing_time(&task(3e8), &ue(3e8, 0.4)).unwrap(), 1.0);
        assert!(local_processing_time(&task(1.0), &ue(0.0, 0.4)).is_err());

        assert_relative_eq!(mec_processing_time(&task(1.8e8), 2e9).unwrap(), 0.09, max_relative = 1e-12);
        assert_eq!(mec_processing_time(&task(5e8), 5e8).unwrap(), 1.0);
        for c in [1.0, 3.3e7, 9.9e8] {
            let t1 = mec_processing_time(&task(c), 4e8).unwrap();
            let t2 = mec_processing_time(&task(c), 8e8).unwrap();
            assert_relative_eq!(t2, t1 / 2.0, max_relative = 1e-15);
        }
        assert!(matches!(mec_processing_time(&task(1.0), 0.0), Err(Error::NoComputeUnits)));
    }

    #[test]
    fn energies() {
        assert_relative_eq!(local_energy(&ue(2e8, 0.4), 1.1), 0.44, max_relative = 1e-12);
        assert_eq!(local_energy(&ue(2e8, 0.4), 0.0), 0.0);
        assert_relative_eq!(local_energy(&ue(2e8, 0.4), 0.3), 0.12, max_relative = 1e-12);

        let u = ue(2e8, 0.4);
        assert_relative_eq!(mec_energy(&u, 0.3086, 0.0), 0.06172, max_relative = 1e-12);
        assert_eq!(mec_energy(&u, 0.0, 5.0), 0.0);
        assert_eq!(mec_energy(&u, 0.25, 0.0), mec_energy(&u, 0.25, 123.0));
    }
}
