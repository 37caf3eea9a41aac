# Toolkit services
