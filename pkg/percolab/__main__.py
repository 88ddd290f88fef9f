from percolab.cli import main

main()
