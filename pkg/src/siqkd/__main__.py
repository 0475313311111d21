from siqkd.cli import main

raise SystemExit(main())
