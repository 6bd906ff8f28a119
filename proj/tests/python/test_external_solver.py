"""Cross-checks the emitted MILP with an independent solver when one is installed."""

import pytest

import ponvirt

highspy = pytest.importorskip("highspy")


def tiny_instance(seed):
    cfg = ponvirt.TopologyConfig()
    cfg.networks = 2
    cfg.objects_per_network = 3
    cfg.relays_per_network = 2
    cfg.relay_layout = "random"
    cfg.request_assignment = "seeded_uniform"
    cfg.vm_types = 2
    cfg.rng_seed = seed
    return ponvirt.build_instance(cfg)


@pytest.mark.parametrize("seed,scenario,reduction", [(1, 1, 0.9), (2, 2, 0.1), (3, 3, 0.5)])
def test_external_optimum_matches_and_validates(tmp_path, seed, scenario, reduction):
    inst = tiny_instance(seed)
    params = ponvirt.ModelParams.for_scenario(scenario, reduction)
    model = tmp_path / "model.lp"
    ponvirt.export_model(inst, params, model)

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_feasibility_tolerance", 1e-9)
    h.setOptionValue("primal_feasibility_tolerance", 1e-9)
    assert h.readModel(str(model)) == highspy.HighsStatus.kOk
    h.run()
    assert h.getModelStatus() == highspy.HighsModelStatus.kOptimal

    expected = ponvirt.solve_exact(inst, params)["report"].total_w
    objective = h.getInfo().objective_function_value
    assert objective == pytest.approx(expected, rel=1e-6)

    lp = h.getLp()
    values = h.getSolution().col_value
    lines = []
    for i, name in enumerate(lp.col_names_):
        v = values[i]
        if name.startswith(("Iv_", "H_")):
            v = round(v)
        if abs(v) > 1e-9:
            lines.append(f"{name} {v!r}")
    solution = tmp_path / "external.txt"
    solution.write_text("\n".join(lines) + "\n")
    check = ponvirt.validate_solution_file(inst, params, solution)
    assert check["violations"] == []
    assert check["total_w"] == pytest.approx(expected, rel=1e-6)
