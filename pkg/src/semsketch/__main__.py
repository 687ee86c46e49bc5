from semsketch.cli import main

main()
