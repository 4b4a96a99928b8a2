app_name = "hyperlab"
app_title = "Hyperlab"
app_publisher = "Abhishek"
app_description = "Noisy first-order optimization on the hyperbolic plane: experiments and lower bounds"
app_email = "abhishekhiremath4949@gmail.com"
app_license = "mit"

# Experiments
# ------------------

# Each experiment name maps to the handler that runs it
experiment_handlers = {
    "pirate": "hyperlab.hyperlab.services.experiments.run_pirate",
    "pack": "hyperlab.hyperlab.services.experiments.run_pack",
    "game": "hyperlab.hyperlab.services.experiments.run_game",
    "optimize": "hyperlab.hyperlab.services.experiments.run_optimize",
    "condition": "hyperlab.hyperlab.services.experiments.run_condition",
    "lemma": "hyperlab.hyperlab.services.experiments.run_lemma",
    "selftest": "hyperlab.hyperlab.services.experiments.run_selftest",
}

