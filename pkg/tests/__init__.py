"""
Test suite for the OFDM-IM dither toolkit

- test_model.py: system parameters and QAM constellation
- test_index_mapper.py: legal patterns and block assembly
- test_transform.py: unitary transforms and oversampling
- test_dither.py: plan construction and the minimax solver
- test_metrics.py: PAPR, CCDF, nu and energy accounting
- test_receiver.py: AWGN channel and power-based receiver
- test_config.py: configuration loading and validation
- test_harness.py: runners, reports and the command line
- test_acceptance.py: Monte-Carlo acceptance checks (--runslow)
"""
