from karokit.cli import main

main()
