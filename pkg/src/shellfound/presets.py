"""Named experiment presets.

Figure contact-trace configurations are explicit presets rather than
derivable from the sweep defaults: the trace figures use dE = 6 while
the sweeps default to dE = 8.
"""

# contact-trace configurations (bonded shell / two-body)
RUN_PRESETS = {
    "defaults": {"dE": 8.0, "dnu": 1.0, "dh": 0.125, "db": 1.0, "n": 250},
    "fig1": {"dE": 6.0, "dnu": 1.0, "dh": 0.25, "db": 1.0, "n": 250},
    "fig2": {"dE": 6.0, "dnu": 1.0, "dh": 0.25, "db": 1.0, "n": 250},
}

# canonical sweep sample sets; each spans the reference extremum with the
# granularity needed to resolve it
SWEEP_PRESETS = {
    "fig3": {
        "param": "dE",
        "values": [2, 3, 4, 5, 5.5, 6, 6.5, 7, 7.5, 8, 9, 10, 12, 14, 16],
    },
    "fig4": {
        "param": "dh",
        "values": [
            0.109375, 0.125, 0.140625, 0.15625, 0.1875,
            0.21875, 0.25, 0.28125, 0.3125, 0.375,
        ],
    },
    "fig5": {
        "param": "dnu",
        "values": [0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0, 1.125, 1.25],
    },
    "fig6": {
        "param": "db",
        "values": [0.9, 0.925, 0.95, 0.975, 1.0, 1.025, 1.05, 1.075, 1.1, 1.15],
    },
}
