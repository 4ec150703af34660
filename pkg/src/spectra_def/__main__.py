from spectra_def.cli import main

main()
